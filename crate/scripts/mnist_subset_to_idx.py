#!/usr/bin/env python3
"""Convert the 5000-image MNIST subset shipped with mlxtend into IDX files.

Usage: mnist_subset_to_idx.py <mlxtend wheel or mnist_5k.csv.gz> <out dir>

Each CSV row holds 784 pixel values followed by the digit label. Output:
  <out>/mnist5k-images-idx3-ubyte.gz
  <out>/mnist5k-labels-idx1-ubyte.gz
"""
import gzip
import struct
import sys
import zipfile
from pathlib import Path


def read_rows(src: Path):
    if src.suffix == ".whl":
        raw = zipfile.ZipFile(src).read("mlxtend/data/data/mnist_5k.csv.gz")
    else:
        raw = src.read_bytes()
    text = gzip.decompress(raw).decode()
    for line in text.strip().splitlines():
        vals = [int(float(v)) for v in line.split(",")]
        yield vals[:-1], vals[-1]


def main():
    src, out = Path(sys.argv[1]), Path(sys.argv[2])
    rows = list(read_rows(src))
    images = bytearray(struct.pack(">IIII", 0x803, len(rows), 28, 28))
    labels = bytearray(struct.pack(">II", 0x801, len(rows)))
    for pixels, label in rows:
        assert len(pixels) == 784
        images.extend(bytes(pixels))
        labels.append(label)
    out.mkdir(parents=True, exist_ok=True)
    # mtime=0 keeps the archives byte-stable across regenerations
    with gzip.GzipFile(out / "mnist5k-images-idx3-ubyte.gz", "wb", mtime=0) as f:
        f.write(images)
    with gzip.GzipFile(out / "mnist5k-labels-idx1-ubyte.gz", "wb", mtime=0) as f:
        f.write(labels)
    print(f"wrote {len(rows)} images to {out}")


if __name__ == "__main__":
    main()
