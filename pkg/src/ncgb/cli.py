"""Command-line front end.

Data goes to stdout, diagnostics and per-phase timings to stderr; the exit
code is 0 exactly when every requested check passed.  Inputs are either
presentation files or catalog keys prefixed with '@' (e.g. @R31).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field as dc_field

from .appendix import TABLES, verify_table
from .groebner import buchberger, export_basis
from .hilbert import (
    OracleSizeError,
    dim_oracle,
    gs_check,
    hilbert_series,
    nilpotency_index,
    render_series,
)
from .inflate import construct5, inflate, split_seed
from .presentation import (
    CATALOG,
    Presentation,
    builtin,
    parse_presentation,
    serialize,
    to_json_dict,
)
from .scalar import FieldSpec


class _Timer:
    def __init__(self):
        self.phases: dict[str, float] = {}

    def time(self, name: str):
        timer = self

        class _Ctx:
            def __enter__(self):
                self.t0 = time.perf_counter()

            def __exit__(self, *exc):
                timer.phases[name] = timer.phases.get(name, 0.0) + (
                    time.perf_counter() - self.t0) * 1000.0

        return _Ctx()

    def report(self) -> None:
        for name, ms in self.phases.items():
            print(f"[time] {name}: {ms:.1f} ms", file=sys.stderr)


@dataclass
class RunReport:
    """Projection of one pipeline run; every field comes from the module
    that computed it."""

    input: str
    characteristic: int
    basis_size: int
    complete_through: int
    series: tuple[int, ...]
    verdict: str
    gs_product: tuple[int, ...] = ()
    gs_ok: bool | None = None
    oracle_checked: tuple[int, ...] = ()

    def to_json(self) -> dict:
        out = {
            "input": self.input,
            "field": self.characteristic,
            "basis_size": self.basis_size,
            "complete_through": self.complete_through,
            "series": list(self.series),
            "verdict": self.verdict,
        }
        if self.gs_ok is not None:
            out["gs_product"] = list(self.gs_product)
            out["gs_ok"] = self.gs_ok
        if self.oracle_checked:
            out["oracle_checked_degrees"] = list(self.oracle_checked)
        return out


def _emit_json(obj) -> None:
    print(json.dumps(obj, sort_keys=True, separators=(",", ":")))


def _load(spec: str, char: int | None, label: str | None = None) -> Presentation:
    """Load '@KEY' from the catalog or parse a presentation file.

    An explicit --char overrides a file's own field line; source
    coefficients are integers, so the reparse over the new field is exact.
    """
    if spec.startswith("@"):
        return builtin(spec[1:], FieldSpec(char or 0))
    with open(spec, "r", encoding="utf-8") as fh:
        text = fh.read()
    if char is not None:
        lines = text.splitlines()
        for i, ln in enumerate(lines):
            if ln.split() and ln.split()[0] == "field":
                lines[i] = f"field {char}"
                break
        text = "\n".join(lines)
    return parse_presentation(text, label=label or spec)


def _seed_for(args) -> int | None:
    if not getattr(args, "seedfile", None):
        return None
    with open(args.seedfile, "r", encoding="utf-8") as fh:
        return int(fh.read().strip())


def cmd_gb(args) -> int:
    timer = _Timer()
    with timer.time("parse"):
        pres = _load(args.input, args.char)
    with timer.time("completion"):
        gb = buchberger(pres, args.maxdeg, shuffle_seed=_seed_for(args))
    text = export_basis(gb)
    if args.json:
        elements = []
        epres = Presentation(gb.fieldspec, gb.generators, ())
        from .presentation import render_coefficients

        for g in gb.elements:
            elements.append([
                [c, [gb.generators[i].label for i in w]]
                for c, w in render_coefficients(g)
            ])
        payload = {
            "field": gb.fieldspec.characteristic,
            "generators": [g.label for g in gb.generators],
            "complete_through": gb.complete_through,
            "elements": elements,
        }
        out = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    else:
        out = text
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out if out.endswith("\n") else out + "\n")
    else:
        sys.stdout.write(out if out.endswith("\n") else out + "\n")
    timer.report()
    return 0


def _pipeline(args, want_oracle: bool) -> tuple[RunReport, "GroebnerBasis", _Timer, bool]:
    timer = _Timer()
    with timer.time("parse"):
        pres = _load(args.input, args.char)
    k = args.k
    with timer.time("completion"):
        gb = buchberger(pres, max(k, max((r.degree() for r in pres.relations), default=k)),
                        shuffle_seed=_seed_for(args))
    with timer.time("series"):
        data = hilbert_series(gb, k)
        verdict = nilpotency_index(gb)
    ok = True
    checked = []
    if want_oracle:
        with timer.time("oracle"):
            for d in range(0, min(4, k) + 1):
                try:
                    dim = dim_oracle(pres, d)
                except OracleSizeError as exc:
                    print(f"[oracle] degree {d} skipped: {exc}", file=sys.stderr)
                    continue
                checked.append(d)
                if dim != data.coefficients[d]:
                    print(
                        f"[oracle] MISMATCH at degree {d}: rank oracle says {dim}, "
                        f"normal-word count says {data.coefficients[d]}",
                        file=sys.stderr)
                    ok = False
    report = RunReport(
        input=args.input,
        characteristic=pres.fieldspec.characteristic,
        basis_size=len(gb.elements),
        complete_through=gb.complete_through,
        series=data.coefficients,
        verdict=verdict.status,
        oracle_checked=tuple(checked),
    )
    return report, gb, timer, ok


def cmd_hilbert(args) -> int:
    report, gb, timer, ok = _pipeline(args, args.oracle_check)
    if args.json:
        _emit_json(report.to_json())
    else:
        print(render_series(report.series))
    timer.report()
    return 0 if ok else 1


def cmd_nilpotent(args) -> int:
    report, gb, timer, ok = _pipeline(args, args.oracle_check)
    if args.json:
        _emit_json(report.to_json())
    else:
        print(report.verdict)
        print(render_series(report.series))
    timer.report()
    if not ok:
        return 1
    if args.strict and not report.verdict.startswith("nilpotent"):
        return 1
    return 0


def cmd_construct(args) -> int:
    timer = _Timer()
    with timer.time("construct"):
        pres = construct5(args.n, FieldSpec(args.char or 0))
    target = (args.n * args.n + 2) // 3
    if args.summary:
        match = "yes" if len(pres.relations) == target else "NO"
        print(f"generators={pres.ngens} relations={len(pres.relations)} "
              f"ceil(n^2/3)={target} match={match}")
    elif args.json:
        _emit_json(to_json_dict(pres))
    else:
        sys.stdout.write(serialize(pres))
    code = 0
    if len(pres.relations) != target or pres.ngens != args.n:
        print("[construct] counts disagree with the target formula", file=sys.stderr)
        code = 1
    if args.verify:
        with timer.time("verify"):
            gb = buchberger(pres, 5, shuffle_seed=_seed_for(args))
            verdict = nilpotency_index(gb)
        print(f"[verify] {verdict.status}", file=sys.stderr)
        if not (verdict.nilpotent and verdict.k <= 5):
            print("[verify] FAILED: degree-5 component did not vanish", file=sys.stderr)
            code = 1
    timer.report()
    return code


def cmd_inflate(args) -> int:
    timer = _Timer()
    with timer.time("parse"):
        pres = _load(args.input, args.char)
    xs = tuple(s for s in args.X.split(",") if s)
    ys = tuple(s for s in args.Y.split(",") if s) if args.Y else ()
    with timer.time("inflate"):
        seed = split_seed(pres, xs, ys)
        result = inflate(seed, args.alpha, args.beta)
    out = result.presentation
    if args.summary:
        n = result.generator_count
        target = (n * n + 2) // 3
        match = "yes" if result.relation_count == target else "no"
        print(f"generators={n} relations={result.relation_count} "
              f"ceil(n^2/3)={target} match={match}")
    elif args.json:
        _emit_json(to_json_dict(out))
    else:
        sys.stdout.write(serialize(out))
    timer.report()
    return 0


def cmd_gs(args) -> int:
    timer = _Timer()
    with timer.time("parse"):
        pres = _load(args.input, args.char)
    k = args.k
    with timer.time("completion"):
        gb = buchberger(pres, max(k, max((r.degree() for r in pres.relations), default=k)),
                        shuffle_seed=_seed_for(args))
    with timer.time("series"):
        data = hilbert_series(gb, k)
    report = gs_check(data, pres.ngens, len(pres.relations))
    if args.json:
        _emit_json({
            "input": args.input,
            "field": pres.fieldspec.characteristic,
            "generators": pres.ngens,
            "relations": len(pres.relations),
            "series": list(data.coefficients),
            "product": list(report.product),
            "checked_through": report.checked_through,
            "nilpotent": report.nilpotent,
            "ok": report.ok,
        })
    else:
        print(f"series:  {render_series(data.coefficients)}")
        print(f"product: {render_series(report.product)}")
        print(f"checked through degree {report.checked_through}: "
              f"{'PASS' if report.ok else 'FAIL'}")
    timer.report()
    return 0 if report.ok else 1


def _print_table_report(rep) -> None:
    print(f"{rep.table} ({rep.algebra}): computed {rep.computed_count} elements, "
          f"{rep.entry_count} corpus entries")
    print(f"  matched as printed: {rep.matched}/{rep.entry_count}")
    for r in rep.flagged:
        print(f"  FLAG {r.name}: {r.status} -> elements {list(r.elements)}; {r.detail}")
    for r in rep.mismatched:
        print(f"  MISMATCH {r.name}: {r.detail}")
    if rep.unmatched_elements:
        print(f"  unmatched computed elements: {rep.unmatched_elements}")
    coeffs = sorted(set(rep.lead_coeffs))
    print(f"  leading coefficients {coeffs}, all +/-2^j: "
          f"{'PASS' if rep.all_pow2 else 'FAIL'}")
    print(f"  series {render_series(rep.series_computed)}: "
          f"{'PASS' if rep.series_ok else 'FAIL'}")
    for t in rep.transfers:
        status = "PASS" if (t.valid and t.leading_words_match) else "FAIL"
        print(f"  transfer mod {t.prime}: {status}")
    if rep.char2_series_match is not None:
        print(f"  char-2 recomputation, series: "
              f"{'PASS' if rep.char2_series_match else 'FAIL'}; "
              f"leading words identical: {rep.char2_lw_match} "
              f"(even leading coefficients vanish mod 2)")
    print(f"  RESULT: {'PASS' if rep.ok else 'FAIL'}")


def cmd_verify_appendix(args) -> int:
    which = list(TABLES) if args.which == "all" else [args.which]
    primes = tuple(int(p) for p in args.primes.split(",") if p)
    all_ok = True
    payloads = []
    for w in which:
        rep = verify_table(w, primes=primes)
        all_ok = all_ok and rep.ok
        if args.json:
            payloads.append({
                "table": rep.table,
                "algebra": rep.algebra,
                "entries": rep.entry_count,
                "computed": rep.computed_count,
                "matched": rep.matched,
                "flagged": [
                    {"name": r.name, "status": r.status,
                     "elements": list(r.elements), "detail": r.detail}
                    for r in rep.flagged],
                "mismatched": [
                    {"name": r.name, "detail": r.detail} for r in rep.mismatched],
                "unmatched_elements": rep.unmatched_elements,
                "lead_coeffs": sorted(set(rep.lead_coeffs)),
                "all_pow2": rep.all_pow2,
                "series": list(rep.series_computed),
                "series_ok": rep.series_ok,
                "transfers": [
                    {"p": t.prime, "valid": t.valid,
                     "leading_words_match": t.leading_words_match}
                    for t in rep.transfers],
                "char2_series_match": rep.char2_series_match,
                "char2_leading_words_match": rep.char2_lw_match,
                "ok": rep.ok,
            })
        else:
            _print_table_report(rep)
    if args.json:
        _emit_json(payloads)
    return 0 if all_ok else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--char", type=int, default=None, metavar="P",
                        help="field characteristic: 0 or a prime "
                             "(default: the input's own field, or 0)")
    common.add_argument("--json", action="store_true",
                        help="machine-readable output on stdout")
    common.add_argument("--strict", action="store_true",
                        help="nonzero exit when a queried property fails")
    common.add_argument("--seedfile", metavar="PATH",
                        help="file holding an integer seed that shuffles the "
                             "within-degree completion order (output must "
                             "not change)")
    parser = argparse.ArgumentParser(
        prog="ncgb",
        description="Exact Groebner engine for graded quadratic algebras: "
                    "truncated bases, Hilbert series, nilpotency "
                    "certification, copy inflation.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_parser(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    p = add_parser("gb", help="reduced truncated Groebner basis")
    p.add_argument("input", help="presentation file or @CATALOG_KEY")
    p.add_argument("--maxdeg", type=int, default=5)
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_gb)

    p = sub.add_parser("hilbert", help="Hilbert series through degree k")
    p.add_argument("input")
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--oracle-check", action="store_true",
                   help="cross-check low degrees against the rank oracle")
    p.set_defaults(func=cmd_hilbert)

    p = sub.add_parser("nilpotent", help="nilpotency verdict at step k")
    p.add_argument("input")
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--oracle-check", action="store_true")
    p.set_defaults(func=cmd_nilpotent)

    p = sub.add_parser("construct",
                       help="n generators, ceil(n^2/3) relations, 5-step nilpotent")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--verify", action="store_true",
                   help="run the full pipeline and assert the certificate")
    p.add_argument("--summary", action="store_true")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("inflate", help="copy-inflate a bi-graded presentation")
    p.add_argument("input")
    p.add_argument("--X", required=True, help="comma-separated X generators")
    p.add_argument("--Y", default="", help="comma-separated Y generators")
    p.add_argument("--alpha", type=int, required=True)
    p.add_argument("--beta", type=int, required=True)
    p.add_argument("--summary", action="store_true")
    p.set_defaults(func=cmd_inflate)

    p = sub.add_parser("gs", help="growth inequality product report")
    p.add_argument("input")
    p.add_argument("--k", type=int, default=5)
    p.set_defaults(func=cmd_gs)

    p = sub.add_parser("verify-appendix",
                       help="recompute and reconcile the bundled reference bases")
    p.add_argument("--which", choices=["table1", "table2", "all"], default="all")
    p.add_argument("--primes", default="3,5,7,11,13")
    p.set_defaults(func=cmd_verify_appendix)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        return 0
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
