"""Writes the JSON fixtures under fixtures/ (repro scenarios and trajectories)."""
import itertools
import json
import pathlib

ROOT = pathlib.Path(__file__).resolve().parent.parent


def label(names, bits):
    return " ".join(f"{n}={b}" for n, b in zip(names, bits))


def worlds(names, pred):
    out = []
    for w in range(1 << len(names)):
        bits = [(w >> i) & 1 for i in range(len(names))]
        if pred(bits):
            out.append(label(names, bits))
    return out


def dump(path, obj):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=2, ensure_ascii=False) + "\n")


abc = ["a", "b", "c"]
at_least_two = lambda b: sum(b) >= 2
table1_sets = [
    worlds(abc, lambda b: True),
    worlds(abc, lambda b: any(b)),
    worlds(abc, lambda b: b[0] or b[1]),
    worlds(abc, at_least_two),
]
dump(ROOT / "fixtures/trajectories/table1.json", {
    "vocabulary": abc,
    "mode": "full",
    "cadence": "step",
    "stages": [
        {"step": i, "worlds": ws, "accuracy": acc}
        for i, (ws, acc) in enumerate(zip(table1_sets, [0.5, 0.625, 0.75, 1.0]))
    ],
})

# r1..r5 are the first five assignments over three atoms, in index order
rows = ["000", "100", "010", "110", "001"]
dump(ROOT / "fixtures/trajectories/worked-example.json", {
    "vocabulary": abc,
    "mode": "observed",
    "cadence": "step",
    "universe": rows,
    "stages": [
        {"step": 0, "worlds": [0]},
        {"step": 1, "worlds": [3, 4]},
        {"step": 2, "worlds": [1, 2, 3, 4]},
    ],
})

ab = ["a", "b"]
dump(ROOT / "fixtures/trajectories/sd-violation.json", {
    "vocabulary": ab,
    "mode": "full",
    "cadence": "step",
    "stages": [
        {"step": 0, "worlds": ["a=1 b=1"]},
        {"step": 1, "worlds": ["a=0 b=0"]},
        {"step": 2, "worlds": ["a=1 b=1"]},
    ],
})

repro = ROOT / "fixtures/repro"
dump(repro / "distances-example.json", {
    "name": "distances-example",
    "vocabulary": ab,
    "k1": "!a & b",
    "k2": "a <-> b",
    "expected": {
        "dist_a": 1,
        "dist_b": ["a=1 b=1", "a=0 b=1", "a=0 b=0"],
    },
    "provenance": {"dist_a": "worked-example", "dist_b": "worked-example"},
})

abcd = ["a", "b", "c", "d"]
dump(repro / "dalal-gradual.json", {
    "name": "dalal-gradual",
    "vocabulary": abcd,
    "belief": "!a & !b & !c & !d",
    "input": "a & b & c & d",
    "expected": {
        "layers": [worlds(abcd, lambda b, k=k: sum(b) == k) for k in (1, 2, 3)],
        "revision": ["a=1 b=1 c=1 d=1"],
        "strict_da": True,
    },
    "provenance": {
        "layers": "worked-example",
        "revision": "worked-example",
        "strict_da": "oracle",
    },
})

dump(repro / "fullmeet-dp2.json", {
    "name": "fullmeet-dp2",
    "vocabulary": ab,
    "belief": "a & b",
    "input": "!a & b",
    "expected": {
        "revision": ["a=0 b=1"],
        "violated": ["R2"],
        "witness": ["a=1 b=1", "a=1 b=0"],
        "lex_holds": ["R1", "R2", "R3", "R4", "LR"],
    },
    "provenance": {
        "revision": "worked-example",
        "violated": "worked-example",
        "witness": "worked-example",
        "lex_holds": "oracle",
    },
})

dump(repro / "table1.json", {
    "name": "table1",
    "trajectory": "table1.json",
    "expected": {
        "sd": True,
        "dist_b_to_last": [
            [w for w in table1_sets[i] if w not in table1_sets[3]]
            + [w for w in table1_sets[3] if w not in table1_sets[i]]
            for i in range(4)
        ],
        "dp_matched": 3,
        "fullmeet_matched": 3,
    },
    "training": {
        "formula": "(a&b)|(a&c)|(b&c)",
        "hidden": [100],
        "epochs": 2000,
        "seeds": list(range(10)),
        "min_converged": 9,
        "final_belief": table1_sets[3],
        "final_accuracy": 1.0,
    },
    "provenance": {
        "sd": "worked-example",
        "dist_b_to_last": "worked-example",
        "dp_matched": "oracle",
        "fullmeet_matched": "oracle",
        "final_belief": "worked-example",
        "final_accuracy": "worked-example",
        "min_converged": "oracle",
    },
})

r = lambda *ix: list(ix)
pre_post = [r(3, 4), r(0), r(1, 2)]
dump(repro / "backprop-dp-example.json", {
    "name": "backprop-dp-example",
    "trajectory": "worked-example.json",
    "expected": {
        "sd": True,
        "initial": [r(0), r(1, 2, 3, 4)],
        "steps": [
            {"phi1": r(3, 4), "notphi2": [], "mid": pre_post, "post": pre_post, "result": r(3, 4)},
            {"phi1": r(3, 4), "notphi2": r(1, 2), "mid": pre_post, "result": r(1, 2, 3, 4)},
        ],
    },
    "provenance": {
        "sd": "worked-example",
        "initial": "worked-example",
        "steps": "worked-example",
    },
})

dump(repro / "mnist-smoke.json", {
    "name": "mnist-smoke",
    "images": "train-images-idx3-ubyte",
    "labels": "train-labels-idx1-ubyte",
    "keep": [[0, 0], [1, 1]],
    "limit": 30,
    "grid": 10,
    "threshold": 128,
    "hidden": [10],
    "epochs": 500,
    "seeds": list(range(10)),
    "expected": {"samples": 30, "inputs": 100, "min_accuracy": 0.9, "min_passing": 8},
    "provenance": {
        "samples": "worked-example",
        "inputs": "worked-example",
        "min_accuracy": "oracle",
        "min_passing": "oracle",
    },
})
