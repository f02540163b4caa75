#!/usr/bin/env python3
"""Write a 5,000-image MNIST subset (500 per class) as IDX files.

The subset ships inside the mlxtend wheel (mlxtend/data/data/mnist_5k.csv.gz),
so it can be fetched from any PyPI mirror without access to the original
dataset hosts. Usage:

    pip download --no-deps -d /tmp/wheels mlxtend
    python3 tools/make_mnist_subset.py /tmp/wheels/mlxtend-*.whl data/
"""
import gzip
import struct
import sys
import zipfile
from pathlib import Path

MEMBER = "mlxtend/data/data/mnist_5k.csv.gz"


def main() -> int:
    if len(sys.argv) != 3:
        print(__doc__, file=sys.stderr)
        return 2
    wheel, out_dir = Path(sys.argv[1]), Path(sys.argv[2])
    rows = gzip.decompress(zipfile.ZipFile(wheel).read(MEMBER)).decode().splitlines()
    pixels = bytearray()
    labels = bytearray()
    for row in rows:
        values = [int(float(v)) for v in row.split(",")]
        pixels.extend(values[:-1])
        labels.append(values[-1])
    count = len(rows)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "mnist5k-images-idx3-ubyte").write_bytes(
        struct.pack(">IIII", 2051, count, 28, 28) + bytes(pixels))
    (out_dir / "mnist5k-labels-idx1-ubyte").write_bytes(
        struct.pack(">II", 2049, count) + bytes(labels))
    print(f"wrote {count} images to {out_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
