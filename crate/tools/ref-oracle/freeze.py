#!/usr/bin/env python3
"""Scores the synthetic corpus with the reference oracles and freezes the
results into crates/core/tests/fixtures/oracle_scores.json.

Usage: tools/ref-oracle/freeze.py PESQ_REF PESQC2_REF

PESQ_REF and PESQC2_REF are the binaries produced by build.sh. Stereo pairs
are passed to the oracles unchanged; they read the interleaved samples as
one mono signal, and that is the value frozen for the interleave strategy.
"""

import csv
import hashlib
import json
import pathlib
import subprocess
import sys
import tempfile

SEARCHBUFFER = 75
ROOT = pathlib.Path(__file__).resolve().parents[2]
OUT = ROOT / "crates/core/tests/fixtures/oracle_scores.json"


def run_oracle(binary, rate, wide, ref, deg):
    args = [binary, f"+{rate}"] + (["+wb"] if wide else []) + [str(ref), str(deg)]
    out = subprocess.run(args, capture_output=True, text=True, check=True).stdout
    result = {"utterances": []}
    for line in out.splitlines():
        key, *vals = line.split()
        if key in ("raw", "mos_lqo"):
            result[key] = float(vals[0])
        elif key == "crude_delay":
            result[key] = int(vals[0])
        elif key == "utterance":
            start, end, delay = (int(v) for v in vals[:3])
            result["utterances"].append([start - SEARCHBUFFER, end - SEARCHBUFFER, delay])
    return result


def sha256(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


def main():
    if len(sys.argv) != 3:
        sys.exit(__doc__)
    pesq, pesqc2 = sys.argv[1:]
    with tempfile.TemporaryDirectory() as tmp:
        corpus = pathlib.Path(tmp)
        subprocess.run(
            ["cargo", "run", "--quiet", "--release", "-p", "pesq-core", "--example", "export_corpus", "--", tmp],
            cwd=ROOT,
            check=True,
        )
        pairs = []
        for row in csv.DictReader(open(corpus / "manifest.csv")):
            ref, deg = corpus / row["ref"], corpus / row["deg"]
            rate, channels = int(row["rate"]), int(row["channels"])
            nb = run_oracle(pesq, rate, False, ref, deg)
            item = {
                "name": row["ref"].removesuffix("_ref.wav"),
                "rate": rate,
                "channels": channels,
                "ref_sha256": sha256(ref),
                "deg_sha256": sha256(deg),
                "nb-raw": nb["raw"],
                "nb-lqo": nb["mos_lqo"],
            }
            if rate == 16000:
                item["wb"] = run_oracle(pesq, rate, True, ref, deg)["mos_lqo"]
                item["wb-c2"] = run_oracle(pesqc2, rate, True, ref, deg)["mos_lqo"]
            if channels == 1:
                item["crude_delay"] = nb["crude_delay"]
                item["utterances"] = nb["utterances"]
            pairs.append(item)
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps({"pairs": pairs}, indent=1) + "\n")
    print(f"froze {len(pairs)} pairs into {OUT.relative_to(ROOT)}")


if __name__ == "__main__":
    main()
