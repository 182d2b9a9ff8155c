#!/usr/bin/env python3
"""Convert the Statlog Heart file (heart.dat) to the CSV layout of heart.schema.json.

heart.dat is whitespace separated with 14 numeric columns; the last one is the
class label and is dropped. Categorical codes are written as integer labels.

    python3 tools/heart_to_csv.py heart.dat data/heart/heart.csv [--labels data/heart/labels.csv]
"""

import argparse
import csv
import sys

COLUMNS = ["age", "sex", "cp", "trestbps", "chol", "fbs", "restecg",
           "thalach", "exang", "oldpeak", "slope", "ca", "thal"]
CATEGORICAL = {"sex", "cp", "restecg", "exang", "thal"}


def fmt(name, token):
    value = float(token)
    if name in CATEGORICAL or value.is_integer():
        return str(int(value))
    return repr(value)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("source")
    parser.add_argument("target")
    parser.add_argument("--labels", help="also write the class column here")
    args = parser.parse_args()

    rows, labels = [], []
    with open(args.source) as f:
        for lineno, line in enumerate(f, 1):
            tokens = line.split()
            if not tokens:
                continue
            if len(tokens) != len(COLUMNS) + 1:
                sys.exit(f"{args.source}:{lineno}: expected {len(COLUMNS) + 1} fields, got {len(tokens)}")
            rows.append([fmt(n, t) for n, t in zip(COLUMNS, tokens)])
            labels.append(fmt("class", tokens[-1]))

    with open(args.target, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(COLUMNS)
        w.writerows(rows)
    if args.labels:
        with open(args.labels, "w", newline="") as f:
            f.write("label\n" + "\n".join(labels) + "\n")
    print(f"wrote {len(rows)} rows to {args.target}")


if __name__ == "__main__":
    main()
