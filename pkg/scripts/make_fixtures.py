#!/usr/bin/env python3
"""Regenerate the fixture documents under fixtures/ from code."""

import argparse

from paramint.cli import write_fixtures


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="fixtures")
    args = ap.parse_args()
    for path in write_fixtures(args.out):
        print(path)


if __name__ == "__main__":
    main()
