"""Batch command-line entry point for analysis and verification workflows."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional

from . import classification as cl
from . import preferences as pref
from . import savage as sv
from . import stats
from .core import Bet, DecisionRule, enumerate_rules
from .data import bundled_dataset
from .engine import (
    EllsbergType,
    MaxminAgent,
    SeuAgent,
    UniformRandom,
    simulate_population,
)


def _classification_lines() -> list[dict]:
    rows = []
    for rule, rule_class, dominator in cl.classification_report():
        rows.append(
            {
                "rule": rule.code,
                "class": rule_class.label,
                "dominated_by": dominator.code if dominator else None,
            }
        )
    return rows


def _format_class_line(row: dict) -> str:
    line = f"{row['rule']} {row['class']}"
    if row["dominated_by"]:
        line += f" dominated-by {row['dominated_by']}"
    return line


def cmd_classify(args) -> int:
    if args.rule:
        rule = DecisionRule.from_code(args.rule)
        rows = [r for r in _classification_lines() if r["rule"] == rule.code]
    else:
        rows = _classification_lines()
    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        for row in rows:
            print(_format_class_line(row))
    return 0


def cmd_dominance_audit(args) -> int:
    rows = []
    passed = True
    for rule in enumerate_rules():
        cert = cl.certificate_for(rule)
        entry = {"rule": rule.code, "dominated": cert is not None}
        if cert is not None:
            entry["dominated_by"] = cert.dominating_rule.code
            entry["construction"] = cert.construction
            entry["difference"] = cert.difference.to_json()
        if rule.white_count >= 2 and (cert is None or cert.construction is None):
            passed = False
            entry["error"] = "expected a W-pair replacement certificate"
        if rule.white_count < 2 and cert is not None:
            # derived finding: under the default urns nothing else is dominated
            entry["note"] = "dominated without a W-pair certificate"
        rows.append(entry)
    dominated = cl.dominated_set()
    if cl.bayesian_set() & dominated:
        passed = False
    if args.json:
        print(json.dumps({"passed": passed, "rules": rows}, indent=2))
    else:
        for entry in rows:
            if entry["dominated"]:
                print(
                    f"{entry['rule']} D dominated-by {entry['dominated_by']}"
                    + (f" [{entry['construction']}]" if entry.get("construction") else "")
                )
            else:
                print(f"{entry['rule']} undominated")
        print(f"audit: {'pass' if passed else 'FAIL'} ({len(dominated)} dominated)")
    return 0 if passed else 1


def cmd_maxmin(args) -> int:
    lo, hi = Fraction(0), Fraction(1)
    if args.interval:
        parts = args.interval.split(",")
        if len(parts) != 2:
            raise SystemExit("--interval expects lo,hi")
        lo, hi = Fraction(parts[0]), Fraction(parts[1])
    model = pref.MaxminEU(lo, hi)
    rows = []
    for rule in enumerate_rules():
        res = pref.maxmin_value(model, rule)
        rows.append(
            {
                "rule": rule.code,
                "value": float(res.value),
                "argmin_omega": float(res.argmin),
                "exact": res.exact,
            }
        )
    optima = sorted(r.code for r in pref.optimal_rules(model))
    best = max(r["value"] for r in rows)
    if args.json:
        print(
            json.dumps(
                {"interval": [str(lo), str(hi)], "optimal": optima, "value": best, "rules": rows},
                indent=2,
            )
        )
    else:
        print("rule,value,argmin_omega")
        for row in rows:
            print(f"{row['rule']},{row['value']:.10g},{row['argmin_omega']:.10g}")
        print(f"optimal: {{{', '.join(optima)}}} value {best:.10g}")
    return 0


def cmd_ci(args) -> int:
    lo, hi = stats.clopper_pearson(args.k, args.n, args.conf)
    if args.json:
        print(
            json.dumps(
                {"k": args.k, "n": args.n, "conf": args.conf, "low": lo, "high": hi}
            )
        )
    else:
        print(f"({lo:.4f}, {hi:.4f})")
    return 0


def _load_dataset(path: Optional[str]) -> stats.ChoiceDataset:
    if path is None or path == "bundled":
        return bundled_dataset()
    return stats.read_csv(path)


def cmd_table(args) -> int:
    table = stats.aggregate(_load_dataset(args.data))
    print(stats.table_json(table) if args.json else stats.table_text(table))
    return 0


def cmd_result1(args) -> int:
    report = stats.result_one(_load_dataset(args.data), args.conf)
    if args.json:
        print(
            json.dumps(
                {
                    "n": report.n,
                    "dominated": report.dominated_count,
                    "proportion": float(report.proportion),
                    "conf": report.confidence,
                    "ci": [report.ci_low, report.ci_high],
                    "p_value": report.p_value,
                    "note": report.note,
                },
                indent=2,
            )
        )
    else:
        pct = 100 * float(report.proportion)
        print(
            f"dominated choices: {report.dominated_count}/{report.n} ({pct:.1f}%)\n"
            f"{report.confidence:.0%} CI: ({report.ci_low:.4f}, {report.ci_high:.4f})\n"
            f"p-value vs proportion 0: {report.p_value} ({report.note})"
        )
    return 0


def cmd_savage_verify(args) -> int:
    bets = "GYW"
    pair_rows = []
    ok = True
    for a in bets:
        for d in bets:
            f = sv.rule_to_savage_act(DecisionRule.from_code(f"{a}WW{d}"))
            g = sv.rule_to_savage_act(DecisionRule.from_code(f"{a}GY{d}"))
            verdict = sv.derive_preference(f, g)
            good = verdict is sv.Preference.STRICTLY_BETTER
            ok = ok and good
            pair_rows.append(
                {"a": a, "d": d, "verdict": verdict.value, "expected": "strictly-better"}
            )
    acts = {
        "W": sv.conditional_bet_act(Bet.WHITE, "Y", "G"),
        "G": sv.conditional_bet_act(Bet.GREEN, "Y", "G"),
        "Y": sv.conditional_bet_act(Bet.YELLOW, "Y", "G"),
    }
    embed_rows = []
    for x in "WGY":
        for y in "WGY":
            if x == y:
                continue
            verdict = sv.derive_preference(acts[x], acts[y])
            good = verdict is sv.Preference.INCOMPARABLE
            ok = ok and good
            embed_rows.append(
                {"first": x, "second": y, "verdict": verdict.value, "expected": "incomparable"}
            )
    if args.json:
        print(
            json.dumps(
                {"passed": ok, "rule_pairs": pair_rows, "single_bet_acts": embed_rows},
                indent=2,
            )
        )
    else:
        for row in pair_rows:
            print(f"({row['a']}GY{row['d']}) vs ({row['a']}WW{row['d']}): {row['verdict']}")
        for row in embed_rows:
            print(f"{row['first']} vs {row['second']}: {row['verdict']}")
        print(f"verification: {'pass' if ok else 'FAIL'}")
    return 0 if ok else 1


def _parse_policy(obj: dict):
    kind = obj.get("type")
    count = int(obj.get("count", 0))
    if kind == "ellsberg":
        policy = EllsbergType(
            a=Bet(obj.get("a", "G").upper()), d=Bet(obj.get("d", "Y").upper())
        )
    elif kind == "seu":
        support = tuple(
            (Fraction(o), Fraction(w)) for o, w in obj["prior"]
        )
        policy = SeuAgent(pref.Prior(support))
    elif kind == "maxmin":
        lo, hi = obj.get("interval", ["0", "1"])
        policy = MaxminAgent(Fraction(lo), Fraction(hi))
    elif kind == "uniform":
        policy = UniformRandom(seed=obj.get("seed"))
    else:
        raise SystemExit(f"unknown policy type {kind!r}")
    return policy, count


def _parse_config(obj: Optional[dict]):
    from .core import DEFAULT_CONFIG, ExperimentConfig

    if not obj:
        return DEFAULT_CONFIG
    return ExperimentConfig(
        risky_white_count=int(obj.get("risky_white_count", 49)),
        risky_total=int(obj.get("risky_total", 100)),
        prize=Fraction(obj.get("prize", 10)),
        show_up_fee=Fraction(obj.get("show_up_fee", 5)),
    )


def cmd_simulate(args) -> int:
    with open(args.spec) as fh:
        spec = json.load(fh)
    policies = [_parse_policy(p) for p in spec["policies"]]
    true_omega = Fraction(spec["true_omega"])
    cfg = _parse_config(spec.get("config"))
    dataset, summary = simulate_population(policies, true_omega, seed=args.seed, cfg=cfg)
    csv_text = stats.dataset_to_csv_text(dataset)
    summary_obj = {
        "true_omega": str(summary.true_omega),
        "seed": summary.seed,
        "total": summary.total,
        "total_wins": summary.total_wins,
        "policies": [
            {"policy": o.policy, "count": o.count, "wins": o.wins, "win_rate": o.win_rate}
            for o in summary.outcomes
        ],
    }
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(csv_text)
        if args.json:
            print(json.dumps(summary_obj, indent=2))
        else:
            for o in summary.outcomes:
                print(f"{o.policy}: {o.wins}/{o.count} wins ({o.win_rate:.4f})")
            print(f"dataset written to {args.out}")
    else:
        if args.json:
            print(json.dumps({"summary": summary_obj, "dataset_csv": csv_text}, indent=2))
        else:
            sys.stdout.write(csv_text)
            for o in summary.outcomes:
                print(f"# {o.policy}: {o.wins}/{o.count} wins ({o.win_rate:.4f})", file=sys.stderr)
    return 0


def cmd_serve(args) -> int:
    import os

    import uvicorn

    from .service import create_app

    addr = args.addr or os.environ.get("URNLAB_ADDR", "127.0.0.1:8000")
    data = args.data or os.environ.get("URNLAB_DATA")
    host, _, port = addr.rpartition(":")
    host = host or "127.0.0.1"
    app = create_app(data_dir=data, ui_dir=args.ui)
    uvicorn.run(app, host=host, port=int(port), log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="urnlab",
        description="Decision-rule analysis and live sessions for the two-urn "
        "betting experiment with informational draws.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify rules as S, N\\S, or D")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--rule", help="single 4-letter rule code")
    group.add_argument("--all", action="store_true", help="all 81 rules (default)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("dominance-audit", help="full pairwise dominance scan with certificates")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_dominance_audit)

    p = sub.add_parser("maxmin", help="worst-case values over a composition interval")
    p.add_argument("--interval", help="lo,hi as fractions (default 0,1)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_maxmin)

    p = sub.add_parser("ci", help="exact binomial confidence interval")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--conf", type=float, default=0.95)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_ci)

    p = sub.add_parser("table", help="frequency table for a choice dataset")
    p.add_argument("--data", help="CSV path, or 'bundled' (default)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_table)

    p = sub.add_parser("result1", help="dominated-choice proportion with exact CI")
    p.add_argument("--data", help="CSV path, or 'bundled' (default)")
    p.add_argument("--conf", type=float, default=0.95)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_result1)

    p = sub.add_parser("savage-verify", help="verify the state-resolved dominance results")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_savage_verify)

    p = sub.add_parser("simulate", help="simulate an agent population")
    p.add_argument("--spec", required=True, help="JSON population spec")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", help="write dataset CSV here instead of stdout")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("serve", help="run the live session service")
    p.add_argument("--addr", help="host:port (or env URNLAB_ADDR; default 127.0.0.1:8000)")
    p.add_argument("--data", help="directory for append-only session logs (or env URNLAB_DATA)")
    p.add_argument("--ui", help="directory with a built web interface to serve")
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
