# -*- coding:utf-8 -*-
import argparse
import logging
import sys
from pathlib import Path

import colorama

from modules import config
from modules import shared
from modules.certificates import build_nested_sequence, verify_nested_sequence
from modules.classification import classify_all
from modules.connectivity import kappa
from modules.errors import *
from modules.experiments import ScanConfig, build_grid_instance, conjecture_scan, run_extremal_check, save_scan_results
from modules.file_formats import read_instance, write_instance, write_matroid
from modules.intertwine import IntertwineInstance, find_intertwined_element, shrink_preserving_both
from modules.matroids.base_matroid import BaseMatroid
from modules.presets import *
from modules.reports import *
from modules.utils import mask_of


def _pair(inst: IntertwineInstance, name: str):
    return (inst.q, inst.r) if name == "QR" else (inst.s, inst.t)


def cmd_kappa(args):
    inst = read_instance(args.instance)
    A, B = _pair(inst, args.pair)
    result = kappa(inst.matroid, A, B, threads=shared.state.threads)
    sys.stdout.write(format_kappa(inst.matroid, result) + "\n")


def cmd_classify(args):
    inst = read_instance(args.instance)
    A, B = _pair(inst, args.pair)
    rows = classify_all(inst.matroid, A, B, inst.matroid.full & ~(A | B))
    sys.stdout.write(format_classification(inst.matroid, rows))


def cmd_intertwine(args):
    inst = read_instance(args.instance)
    if args.shrink:
        result = shrink_preserving_both(inst, proof_path=args.proof_path)
        sys.stdout.write(format_shrink(inst, result))
        data = shrink_json(inst, result)
    else:
        report = find_intertwined_element(inst, proof_path=args.proof_path)
        sys.stdout.write(format_intertwine(inst, report))
        data = intertwine_json(inst, report)
    if args.json:
        Path(args.json).parent.mkdir(parents=True, exist_ok=True)
        Path(args.json).write_text(dumps_json(data), encoding="utf-8")


def cmd_grid(args):
    if args.extremal_check:
        result = run_extremal_check(args.k, args.l)
        grid = result.grid
    else:
        result = grid = build_grid_instance(args.k, args.l)
    sys.stdout.write(format_grid(result))
    if args.write:
        write_instance(args.write, grid.instance)


def cmd_nested(args):
    inst = read_instance(args.instance)
    M = inst.matroid
    A, B = _pair(inst, args.pair)
    if args.elements:
        F = M.ground.mask_of(args.elements)
    else:
        rows = classify_all(M, A, B, M.full & ~(A | B))
        F = mask_of(c.element for c in rows if not c.flexible)
    cert = build_nested_sequence(M, A, B, F)
    verdict = verify_nested_sequence(M, A, B, F, cert)
    sys.stdout.write(format_nested(M, cert, verdict))


def cmd_scan(args):
    scan = ScanConfig.from_file(args.config)
    result = conjecture_scan(scan)
    sys.stdout.write(format_scan(result))
    save_scan_results(result, args.out or config.output_dir)


def _persist_violation(error: TheoremViolation):
    target = Path(config.counterexample_dir)
    instance = error.instance
    try:
        if isinstance(instance, IntertwineInstance):
            return write_instance(target / f"violation-{instance.name or 'instance'}{INSTANCE_SUFFIX}", instance)
        if isinstance(instance, tuple) and instance and isinstance(instance[0], BaseMatroid):
            return write_matroid(target / f"violation{MATROID_SUFFIX}", instance[0])
    except (OSError, SizeCapExceeded) as e:
        logging.error(f"could not save the violating instance: {e}")
    return None


def build_parser():
    parser = argparse.ArgumentParser(
        prog="Intertwiner.py",
        description="Matroid connectivity toolkit: kappa, deletable/contractible elements, intertwining searches.",
    )
    parser.add_argument("--threads", type=int, default=None, help="worker count (default: INTERTWINE_THREADS or all cores)")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING, ...")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kappa", help="kappa of a pair and its smallest witness")
    p.add_argument("instance")
    p.add_argument("--pair", choices=["QR", "ST"], default="QR")
    p.set_defaults(func=cmd_kappa)

    p = sub.add_parser("classify", help="deletable/contractible table for the elements outside the pair")
    p.add_argument("instance")
    p.add_argument("--pair", choices=["QR", "ST"], default="QR")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("intertwine", help="find an element of F keeping both connectivities")
    p.add_argument("instance")
    p.add_argument("--shrink", action="store_true", help="apply qualifying operations until none is left")
    p.add_argument("--proof-path", action="store_true", help="search through a linking pair (S1, T1)")
    p.add_argument("--json", default=None, help="write the machine-readable report here")
    p.set_defaults(func=cmd_intertwine)

    p = sub.add_parser("grid", help="the (k+1) x (l+1) grid instance")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--extremal-check", action="store_true")
    p.add_argument("--write", default=None, help="save the grid as an instance file")
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("nested", help="build and verify a nested separation certificate")
    p.add_argument("instance")
    p.add_argument("--pair", choices=["QR", "ST"], default="QR")
    p.add_argument("--elements", nargs="+", default=None, help="labels forming F")
    p.set_defaults(func=cmd_nested)

    p = sub.add_parser("scan", help="random conjecture scan driven by a configuration file")
    p.add_argument("config")
    p.add_argument("--out", default=None, help=f"directory for {SCAN_RECORDS_FILE} and {SCAN_SUMMARY_FILE}")
    p.set_defaults(func=cmd_scan)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads is not None:
        shared.state.set_threads(args.threads)
    if args.log_level:
        logging.getLogger().setLevel(args.log_level.upper())
    try:
        args.func(args)
    except (TheoremViolation, KappaMismatch, CertificateNotFound, ShrinkStuck) as e:
        path = _persist_violation(e) if isinstance(e, TheoremViolation) else None
        logging.error(colorama.Back.RED + f"{NONE_ALARM_MSG}: {e}" + colorama.Style.RESET_ALL)
        if path is not None:
            sys.stderr.write(f"{THEOREM_VIOLATION_MSG} {path}\n")
        return EXIT_THEOREM_VIOLATION
    except (SizeCapExceeded, BudgetExhausted) as e:
        sys.stderr.write(f"{STANDARD_ERROR_MSG}{SIZE_CAP_MSG if isinstance(e, SizeCapExceeded) else ''} {e}\n")
        return EXIT_RESOURCE_CAP
    except (IntertwineError, ValueError) as e:
        sys.stderr.write(f"{STANDARD_ERROR_MSG}{PARSE_ERROR_MSG}: {e}\n")
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
