#!/usr/bin/env python3
"""Compute weight distributions for catalog entries that carry a wd_ref,
using the lincorr binary (direct enumeration or dual + MacWilliams)."""
import json
import os
import subprocess
import sys
import tempfile

here = os.path.dirname(os.path.abspath(__file__))
data = os.path.dirname(here)
binary = sys.argv[1]
max_dim = sys.argv[2] if len(sys.argv) > 2 else "31"
only = set(sys.argv[3:])

for line in open(os.path.join(data, "starter.jsonl")):
    e = json.loads(line)
    ref = e.get("wd_ref")
    if not ref or (only and e["name"] not in only):
        continue
    path = os.path.join(data, ref)
    if os.path.exists(path):
        continue
    code = dict(e)
    code.pop("wd_ref")
    with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as f:
        json.dump(code, f)
    r = subprocess.run([binary, "wd", "--code", f.name, "--max-dim", max_dim],
                       capture_output=True, text=True)
    os.unlink(f.name)
    if r.returncode != 0:
        print("%s: %s" % (e["name"], r.stderr.strip()))
        continue
    with open(path, "w") as out:
        out.write("# %s [%d,%d], %s\n" % (e["name"], e["n"], e["k"], e["provenance"]))
        out.write(r.stdout)
    print("%s done" % e["name"])
