#!/usr/bin/env python3
"""Check every golden PBM against an independent QR reader (OpenCV).

Usage: verify_golden.py [--stamp]

Reads tests/golden/manifest.json, decodes each listed PBM with
cv2.QRCodeDetector, and compares the text against the manifest payload.
With --stamp, records the verifier and per-file results in the manifest.
Exits nonzero if any symbol fails to decode to its expected payload.
"""

import json
import pathlib
import sys

import cv2
import numpy as np


def read_pbm(path: pathlib.Path) -> np.ndarray:
    tokens = []
    for line in path.read_text().splitlines():
        line = line.split("#", 1)[0]
        tokens.extend(line.split())
    if not tokens or tokens[0] != "P1":
        raise ValueError(f"{path}: not an ASCII PBM")
    w, h = int(tokens[1]), int(tokens[2])
    bits = "".join(tokens[3:])
    if len(bits) != w * h:
        raise ValueError(f"{path}: wrong pixel count")
    grid = np.frombuffer(bits.encode(), dtype=np.uint8).reshape(h, w) - ord("0")
    return grid.astype(np.uint8)


def to_image(grid: np.ndarray, scale: int = 8, margin: int = 4) -> np.ndarray:
    img = (1 - grid) * np.uint8(255)  # PBM 1 = dark
    img = np.kron(img, np.ones((scale, scale), dtype=np.uint8))
    pad = margin * scale
    return np.pad(img, pad, constant_values=255)


def main() -> int:
    stamp = "--stamp" in sys.argv[1:]
    golden = pathlib.Path(__file__).resolve().parent.parent / "tests" / "golden"
    manifest_path = golden / "manifest.json"
    manifest = json.loads(manifest_path.read_text())

    # The legacy detector cannot always locate dense high-version symbols;
    # the Aruco-based one picks those up. Both are independent readers.
    detectors = [("QRCodeDetector", cv2.QRCodeDetector()),
                 ("QRCodeDetectorAruco", cv2.QRCodeDetectorAruco())]
    failures = 0
    for entry in manifest["symbols"]:
        path = golden / entry["file"]
        image = to_image(read_pbm(path))
        ok, used = False, "none"
        for used, detector in detectors:
            text, _, _ = detector.detectAndDecode(image)
            if text == entry["payload"]:
                ok = True
                break
        if stamp:
            entry["third_party"] = f"ok ({used})" if ok else f"FAIL (got {text!r})"
        status = "ok  " if ok else "FAIL"
        print(f"{status} {entry['file']}: version {entry['version']} "
              f"ec {entry['ec']} payload[{len(entry['payload'])}]")
        if not ok:
            failures += 1
            print(f"     expected {entry['payload']!r}")
            print(f"     decoded  {text!r}")

    if stamp:
        manifest["verifier"] = f"OpenCV QRCodeDetector {cv2.__version__}"
        manifest_path.write_text(json.dumps(manifest, indent=2) + "\n")
        print(f"stamped manifest with verifier results")

    total = len(manifest["symbols"])
    print(f"{total - failures}/{total} symbols verified")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
