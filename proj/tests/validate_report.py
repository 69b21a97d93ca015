#!/usr/bin/env python3
"""Validates emitted eval reports against the shipped JSON schema.

Usage: validate_report.py <hbmatch-binary> <schema-path>
Generates a small dataset, runs a plain-mode eval, and validates the report.
"""
import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema


def main() -> int:
    hbmatch, schema_path = sys.argv[1], sys.argv[2]
    schema = json.loads(Path(schema_path).read_text())
    with tempfile.TemporaryDirectory(prefix="hb_schema_") as tmp:
        tmp = Path(tmp)
        run = lambda *args: subprocess.run(
            [hbmatch, *args], check=True, capture_output=True, text=True
        )
        run(
            "synth", "--subjects", "4", "--sessions", "3", "--p-flip", "0.05",
            "--face-noise", "0.1", "--max-shift", "3", "--seed", "5",
            "--out", str(tmp / "data"),
        )
        report_path = tmp / "report.json"
        run(
            "eval", "--dataset", str(tmp / "data"), "--modality", "all",
            "--mode", "plain", "--out", str(report_path), "--threads", "2",
        )
        report = json.loads(report_path.read_text())
        jsonschema.validate(report, schema)
        # the same schema must also reject a malformed report
        bad = dict(report)
        bad["rows"] = []
        try:
            jsonschema.validate(bad, schema)
        except jsonschema.ValidationError:
            pass
        else:
            print("schema failed to reject an empty rows array", file=sys.stderr)
            return 1
    print("report schema validation OK")
    return 0


if __name__ == "__main__":
    sys.exit(main())
