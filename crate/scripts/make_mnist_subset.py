"""Build the small MNIST IDX subset under data/mnist-subset/.

Source: the `mnist` npm package (digits stored as JSON arrays of 784
intensities in [0, 1] per image). Images are re-quantised to bytes and
written as uncompressed IDX files.

    npm pack mnist && tar xzf mnist-*.tgz
    python3 scripts/make_mnist_subset.py package/src/digits data/mnist-subset
"""
import json
import random
import struct
import sys
from pathlib import Path

PER_DIGIT = {0: 24, 1: 24, 2: 8}


def load(digits_dir, digit, count):
    data = json.loads((Path(digits_dir) / f"{digit}.json").read_text())["data"]
    out = []
    for k in range(count):
        px = data[k * 784:(k + 1) * 784]
        out.append(bytes(min(255, max(0, round(v * 255))) for v in px))
    return out


def main(digits_dir, out_dir):
    items = []
    for digit, count in PER_DIGIT.items():
        items += [(digit, img) for img in load(digits_dir, digit, count)]
    random.Random(7).shuffle(items)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "train-images-idx3-ubyte", "wb") as f:
        f.write(struct.pack(">IIII", 0x00000803, len(items), 28, 28))
        for _, img in items:
            f.write(img)
    with open(out / "train-labels-idx1-ubyte", "wb") as f:
        f.write(struct.pack(">II", 0x00000801, len(items)))
        f.write(bytes(d for d, _ in items))


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
