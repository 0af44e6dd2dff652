#!/usr/bin/env python3
"""Fetch and convert the LA ozone table to data/ozone.csv.

The raw file (LAozone.data) is a public CSV with columns

    ozone, vh, wind, humidity, temp, ibh, dpg, ibt, vis, doy

The converted file drops the day-of-year column and keeps the response
first, giving the 330 x 9 layout the benchmark code expects. Run this on a
machine with network access, or pass --from-file if you already have the
raw file locally.
"""

import argparse
import csv
import io
import sys
import urllib.request
from pathlib import Path

URL = "https://hastie.su.domains/ElemStatLearn/datasets/LAozone.data"
RAW_COLUMNS = ["ozone", "vh", "wind", "humidity", "temp", "ibh", "dpg", "ibt", "vis", "doy"]
KEEP = RAW_COLUMNS[:-1]
EXPECTED_ROWS = 330


def convert(raw_text: str, out_path: Path) -> None:
    reader = csv.reader(io.StringIO(raw_text))
    header = next(reader)
    header = [h.strip() for h in header]
    if header != RAW_COLUMNS:
        sys.exit(f"unexpected raw header {header}; wanted {RAW_COLUMNS}")
    rows = [row for row in reader if row]
    if len(rows) != EXPECTED_ROWS:
        sys.exit(f"expected {EXPECTED_ROWS} data rows, found {len(rows)}")
    keep_idx = [RAW_COLUMNS.index(c) for c in KEEP]
    for row in rows:
        for i in keep_idx:
            float(row[i])  # fail early on a corrupt download
    out_path.parent.mkdir(parents=True, exist_ok=True)
    with out_path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(KEEP)
        for row in rows:
            writer.writerow([row[i].strip() for i in keep_idx])
    print(f"wrote {len(rows)} rows x {len(KEEP)} columns to {out_path}")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="data/ozone.csv",
                        help="converted CSV destination (default data/ozone.csv)")
    parser.add_argument("--from-file", default=None,
                        help="use a local copy of LAozone.data instead of downloading")
    parser.add_argument("--url", default=URL, help="raw data URL")
    args = parser.parse_args()

    if args.from_file:
        raw = Path(args.from_file).read_text()
    else:
        print(f"downloading {args.url}")
        with urllib.request.urlopen(args.url, timeout=60) as response:
            raw = response.read().decode("utf-8")
    convert(raw, Path(args.out))


if __name__ == "__main__":
    main()
