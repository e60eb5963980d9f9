"""Command-line front end.

Exit codes: 0 success, 1 internal invariant failure, 2 input or parse error,
3 dominance violation, 4 oracle mismatch.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from .algebra import InvariantError, is_prime, MAX_MODULUS
from .oracle import InstanceTooLarge, OracleError, image_barcode_oracle
from .pipeline import compute_image_barcode, compute_single_barcode
from .report import render
from .rips import FORMATS, DistanceMatrix, DominanceError, FiltrationPair, InputError, parse_distance_input

EXIT_OK, EXIT_INTERNAL, EXIT_INPUT, EXIT_DOMINANCE, EXIT_MISMATCH = 0, 1, 2, 3, 4
MODES = ("image", "single", "oracle-check")


@dataclass
class RunConfig:
    domain_path: str | None
    codomain_path: str | None
    format: str = "lower-distance"
    max_dim: int = 1
    threshold: float = math.inf
    modulus: int = 2
    output: str = "text"
    emit_witnesses: bool = False
    mode: str = "image"
    clearing: bool = True
    shortcut: bool = True

    def validate(self) -> None:
        if not is_prime(self.modulus) or self.modulus >= MAX_MODULUS:
            raise InputError(f"modulus must be a prime below {MAX_MODULUS}")
        if self.max_dim < 0:
            raise InputError("--dim must be nonnegative")
        if not self.threshold > 0:
            raise InputError("--threshold must be positive")
        if self.format not in FORMATS:
            raise InputError(f"unknown input format {self.format!r}")
        if self.mode not in MODES:
            raise InputError(f"unknown mode {self.mode!r}")
        if self.mode != "single" and (self.domain_path is None or self.codomain_path is None):
            raise InputError(f"mode {self.mode} needs a domain and a codomain file")


def _load(path: str, fmt: str) -> DistanceMatrix:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return parse_distance_input(text, fmt)


def run(config: RunConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        config.validate()
        if config.mode == "single":
            path = config.codomain_path or config.domain_path
            D = _load(path, config.format)
            barcode = compute_single_barcode(D, config.max_dim, config.threshold, config.modulus,
                                             clearing=config.clearing, shortcut=config.shortcut)
        else:
            pair = FiltrationPair(_load(config.domain_path, config.format),
                                  _load(config.codomain_path, config.format),
                                  config.max_dim, config.threshold)
            barcode = compute_image_barcode(pair, config.modulus, clearing=config.clearing,
                                            shortcut=config.shortcut)
            if config.mode == "oracle-check":
                expected = image_barcode_oracle(pair, p=config.modulus)
                if barcode != expected:
                    only_pipeline, only_oracle = barcode.difference(expected)
                    print("oracle mismatch", file=err)
                    for label, bars in (("pipeline only", only_pipeline), ("oracle only", only_oracle)):
                        for (deg, b, d), mult in sorted(bars.items()):
                            print(f"  {label}: dim {deg}: [{b}, {d}) x{mult}", file=err)
                    out.write(render(barcode, config.output, config.emit_witnesses))
                    return EXIT_MISMATCH
    except DominanceError as exc:
        print(exc.report.describe(), file=err)
        return EXIT_DOMINANCE
    except (InputError, InstanceTooLarge, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INPUT
    except (InvariantError, OracleError) as exc:
        print(f"internal error: {exc}", file=err)
        return EXIT_INTERNAL
    out.write(render(barcode, config.output, config.emit_witnesses))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="imagepers",
        description="Barcode of the image of persistent homology under an inclusion of "
                    "Vietoris-Rips filtrations Rips(X, dL) -> Rips(X, dK) with dL >= dK.")
    ap.add_argument("domain", help="distance data for dL (the larger dissimilarity)")
    ap.add_argument("codomain", nargs="?", help="distance data for dK")
    ap.add_argument("--format", default="lower-distance", choices=FORMATS, help="input format")
    ap.add_argument("--dim", type=int, default=1, help="maximal homology degree (default 1)")
    ap.add_argument("--threshold", type=float, default=math.inf, help="largest filtration value")
    ap.add_argument("--modulus", type=int, default=2, help="prime coefficient field (default 2)")
    ap.add_argument("--output", default="text", choices=("text", "csv", "json"), help="report format")
    ap.add_argument("--witnesses", action="store_true", help="include birth and death simplices")
    ap.add_argument("--mode", default="image", choices=MODES,
                    help="image barcode, single barcode of the codomain, or image checked against the oracle")
    ap.add_argument("--no-clearing", action="store_true", help="disable clearing")
    ap.add_argument("--no-shortcut", action="store_true", help="disable the emergent pair shortcut")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = RunConfig(args.domain, args.codomain, args.format, args.dim, args.threshold,
                       args.modulus, args.output, args.witnesses, args.mode,
                       not args.no_clearing, not args.no_shortcut)
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
