"""Command-line interface for group inspection, identity checks, codes, and QKD runs."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .checks import (
    ALL_IDENTITIES,
    CODE_FAMILY_IDENTITY,
    DEFAULT_SWEEP,
    GROUP_IDENTITIES,
    check_code_family,
)
from .css import (
    CODE_PRESETS,
    CssCode,
    kl_check,
    make_css,
    sweep_errors,
    weyl_error_pairs,
)
from .errors import ResourceLimitError
from .groups import (
    GroupSpec,
    Subgroup,
    annihilator,
    coset_table,
    pairing_exponent,
)
from .hilbert import fourier_basis_state, state_to_json_dict
from .protocols import (
    ChannelModel,
    InterceptResendEve,
    ProtocolParams,
    aggregate_stats,
    run_trials,
)

TOOL_NAME = "abelqec"


def _parse_moduli(text: str) -> tuple[int, ...]:
    """Parse '2,4' or '2x4' into a moduli tuple."""
    parts = text.replace("x", ",").split(",")
    try:
        moduli = tuple(int(p) for p in parts if p != "")
    except ValueError as exc:
        raise ValueError(f"cannot parse moduli {text!r}") from exc
    if not moduli:
        raise ValueError(f"cannot parse moduli {text!r}")
    return moduli


def _parse_group_list(text: str) -> list[tuple[int, ...]]:
    """Parse '2,3,2x2' into a list of moduli tuples (comma-separated groups)."""
    groups = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        groups.append(tuple(int(p) for p in token.split("x")))
    if not groups:
        raise ValueError(f"cannot parse group list {text!r}")
    return groups


def _parse_generators(text: str) -> list[tuple[int, ...]]:
    """Parse '1,0;0,1' into generator coordinate tuples."""
    gens = []
    for token in text.split(";"):
        token = token.strip()
        if not token:
            continue
        gens.append(tuple(int(p) for p in token.split(",")))
    return gens


def _resolve_seed(args: argparse.Namespace) -> int:
    if getattr(args, "seed", None) is not None:
        return int(args.seed)
    return int(np.random.SeedSequence().entropy)


def _base_report(command: str, seed: int, config: dict) -> dict:
    return {
        "tool": TOOL_NAME,
        "version": __version__,
        "command": command,
        "seed": seed,
        "config": config,
    }


def _emit(report: dict, args: argparse.Namespace, human_lines: list[str]) -> None:
    text = json.dumps(report, sort_keys=True, indent=2)
    if getattr(args, "out", None):
        Path(args.out).write_text(text + "\n")
    if getattr(args, "json", False):
        print(text)
    else:
        for line in human_lines:
            print(line)


def _code_from_args(args: argparse.Namespace) -> tuple[CssCode, dict]:
    preset = getattr(args, "preset", None)
    config_path = getattr(args, "config", None)
    if preset and config_path:
        raise ValueError("give either --preset or --config, not both")
    if preset:
        return CODE_PRESETS[preset](), {"preset": preset}
    if config_path:
        data = json.loads(Path(config_path).read_text())
        code = make_css(
            GroupSpec(tuple(int(m) for m in data["moduli"])),
            int(data["n"]),
            [tuple(int(c) for c in row) for row in data["c1"]],
            [tuple(int(c) for c in row) for row in data.get("c2", [])],
        )
        return code, {"file": str(config_path), "definition": data}
    raise ValueError("a code is required: pass --preset or --config")


def _code_facts(code: CssCode) -> dict:
    return {
        "moduli": list(code.base.moduli),
        "n": code.n,
        "c1_order": code.c1.order,
        "c2_order": code.c2.order,
        "c1_min_distance": code.d1,
        "dual_min_distance": code.d2_perp,
        "t1": code.t1,
        "t2": code.t2,
        "key_count": code.dimension,
        "c1_pairing_nondegenerate": code.c1_pairing_nondegenerate,
        "c2_pairing_nondegenerate": code.c2_pairing_nondegenerate,
    }


def cmd_group(args: argparse.Namespace, seed: int) -> int:
    moduli = _parse_moduli(args.moduli)
    group = GroupSpec(moduli)
    config = {"moduli": list(moduli), "subgroup": args.subgroup}
    report = _base_report("group", seed, config)
    report["order"] = group.order
    report["strides"] = list(group.strides)
    lines = [
        f"seed {seed}",
        f"group {'x'.join(f'Z{m}' for m in moduli)} of order {group.order}",
    ]
    if group.order <= 64:
        report["character_modulus"] = group.lcm_exponent
        report["character_exponents"] = [
            [pairing_exponent(x, y) for y in group.elements()] for x in group.elements()
        ]
        if group.order <= 16:
            lines.append(f"character exponents (mod {group.lcm_exponent}):")
            for row in report["character_exponents"]:
                lines.append("  " + " ".join(f"{v:2d}" for v in row))
    if args.subgroup is not None:
        sub = Subgroup.from_generators(group, _parse_generators(args.subgroup))
        perp = annihilator(sub)
        table = coset_table(group, sub)
        report["subgroup"] = {
            "order": sub.order,
            "elements": [list(e.coords) for e in sub],
        }
        report["annihilator"] = {
            "order": perp.order,
            "elements": [list(e.coords) for e in perp],
        }
        report["cosets"] = {
            "count": len(table),
            "representatives": [list(r.coords) for r in table.representatives],
        }
        lines.append(f"subgroup order {sub.order}: {[list(e.coords) for e in sub]}")
        lines.append(f"annihilator order {perp.order}: {[list(e.coords) for e in perp]}")
        lines.append(
            f"cosets {len(table)}: reps {[list(r.coords) for r in table.representatives]}"
        )
    _emit(report, args, lines)
    return 0


def cmd_verify(args: argparse.Namespace, seed: int) -> int:
    identities = args.identity if args.identity else list(ALL_IDENTITIES)
    for ident in identities:
        if ident not in ALL_IDENTITIES:
            raise ValueError(f"unknown identity {ident!r}; expected one of {ALL_IDENTITIES}")
    groups = (
        _parse_group_list(args.groups) if args.groups else [list(m) for m in DEFAULT_SWEEP]
    )
    config = {
        "identities": list(identities),
        "groups": [list(m) for m in groups],
        "trials": args.trials,
    }
    report = _base_report("verify", seed, config)
    rng = np.random.default_rng(seed)
    results = []
    for ident in identities:
        if ident == CODE_FAMILY_IDENTITY:
            for label, factory in CODE_PRESETS.items():
                results.extend(check_code_family(factory(), label))
        else:
            fn = GROUP_IDENTITIES[ident]
            for moduli in groups:
                results.append(fn(GroupSpec(tuple(moduli)), rng, args.trials))
    failed = sum(1 for r in results if r.status == "failed")
    report["results"] = [r.to_json_dict() for r in results]
    report["failed"] = failed
    report["status"] = "ok" if failed == 0 else "failed"
    lines = [f"seed {seed}"]
    for r in results:
        lines.append(
            f"[{r.status}] {r.identity} on {r.subject}: "
            f"max error {r.max_error:.3e} over {r.cases} cases (tol {r.tolerance:.0e})"
        )
    lines.append(f"verify: {report['status']} ({failed} failed of {len(results)})")
    if args.echo:
        first = GroupSpec(tuple(groups[0]))
        sample = fourier_basis_state(first.element_at(first.order - 1))
        report["sample_state"] = state_to_json_dict(sample)
        lines.append(f"sample state: {json.dumps(report['sample_state'], sort_keys=True)}")
    _emit(report, args, lines)
    return 0 if failed == 0 else 1


def cmd_css(args: argparse.Namespace, seed: int) -> int:
    code, code_config = _code_from_args(args)
    config = {
        "code": code_config,
        "sweep": args.sweep,
        "kl": args.kl,
        "max_wt1": args.max_wt1,
        "max_wt2": args.max_wt2,
    }
    report = _base_report("css", seed, config)
    report["code"] = _code_facts(code)
    lines = [
        f"seed {seed}",
        f"code over {'x'.join(f'Z{m}' for m in code.base.moduli)}^{code.n}: "
        f"|C1|={code.c1.order} |C2|={code.c2.order} d1={code.d1} "
        f"d2_perp={code.d2_perp} keys={code.dimension}",
    ]
    ok = True
    rng = np.random.default_rng(seed)
    if args.sweep:
        res = sweep_errors(code, args.max_wt1, args.max_wt2, rng)
        report["sweep"] = res
        sweep_ok = res["min_fidelity"] >= 1.0 - 1e-9 and res["exact_syndromes"]
        ok = ok and sweep_ok
        lines.append(
            f"[{'ok' if sweep_ok else 'failed'}] sweep: {res['cases']} cases, "
            f"min fidelity {res['min_fidelity']:.12f}, exact syndromes {res['exact_syndromes']}"
        )
    if args.kl:
        w1 = code.t1 if args.max_wt1 is None else args.max_wt1
        w2 = code.t2 if args.max_wt2 is None else args.max_wt2
        errors = weyl_error_pairs(code, w1, w2)
        kr = kl_check(code, errors)
        report["correctability"] = {
            "pairs": len(errors),
            "max_deviation": kr.max_deviation,
            "passed": kr.passed,
        }
        ok = ok and kr.passed
        lines.append(
            f"[{'ok' if kr.passed else 'failed'}] correctability: {len(errors)} error pairs, "
            f"max deviation {kr.max_deviation:.3e}"
        )
    report["status"] = "ok" if ok else "failed"
    lines.append(f"css: {report['status']}")
    _emit(report, args, lines)
    return 0 if ok else 1


def cmd_qkd(args: argparse.Namespace, seed: int) -> int:
    code, code_config = _code_from_args(args)
    noise = (
        ChannelModel(args.p_x, args.p_z) if (args.p_x > 0 or args.p_z > 0) else None
    )
    eve = InterceptResendEve() if args.eve == "intercept" else None
    params = ProtocolParams(
        code, delta=args.delta, t_check=args.t_check, noise=noise, eve=eve
    )
    protocol = {"cssg": "css", "bb84g": "bb84"}[args.protocol]
    config = {
        "code": code_config,
        "protocol": args.protocol,
        "trials": args.trials,
        **params.to_json_dict(),
    }
    report = _base_report("qkd", seed, config)
    transcripts = run_trials(params, protocol, args.trials, seed)
    summary = aggregate_stats(transcripts)
    report["summary"] = summary.to_json_dict()
    if args.transcripts:
        with open(args.transcripts, "w") as fh:
            for t in transcripts:
                fh.write(json.dumps(t.to_json_dict(), sort_keys=True) + "\n")
    lines = [
        f"seed {seed}",
        f"{args.protocol} on {'x'.join(f'Z{m}' for m in code.base.moduli)}^{code.n}, "
        f"{args.trials} trials",
        f"aborts {summary.aborts}/{summary.trials} ({summary.abort_rate:.4f})"
        + (f" reasons {summary.abort_reasons}" if summary.abort_reasons else ""),
    ]
    if summary.disagreement_rate is not None:
        lines.append(
            f"check disagreement {summary.disagreement_total}/{summary.checked_total} "
            f"= {summary.disagreement_rate:.4f} +/- {summary.disagreement_ci:.4f}"
        )
    if summary.key_agreement_rate is not None:
        lines.append(
            f"key agreement {summary.key_agreement_rate:.4f} over {summary.key_trials} kept trials"
        )
    _emit(report, args, lines)
    return 0


def _add_common(sp: argparse.ArgumentParser, config_flag: bool = False) -> None:
    sp.add_argument("--seed", type=int, default=None, help="master seed (default: fresh entropy)")
    sp.add_argument("--out", type=str, default=None, help="write the JSON report to this path")
    sp.add_argument("--json", action="store_true", help="print the JSON report to stdout")
    if config_flag:
        sp.add_argument("--config", type=str, default=None, help="JSON code definition file")
        sp.add_argument(
            "--preset",
            type=str,
            default=None,
            choices=sorted(CODE_PRESETS),
            help="built-in code preset",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=TOOL_NAME,
        description="Exact simulation of CSS codes and key distribution over finite abelian groups.",
    )
    parser.add_argument("--version", action="version", version=f"{TOOL_NAME} {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("group", help="inspect a group, subgroup, and its cosets")
    sp.add_argument("--moduli", type=str, required=True, help="cyclic factors, e.g. 2,4 or 2x4")
    sp.add_argument(
        "--subgroup", type=str, default=None, help="generators, e.g. '1,0;0,1' (semicolon-separated)"
    )
    _add_common(sp)
    sp.set_defaults(func=cmd_group)

    sp = sub.add_parser("verify", help="run identity checks over a sweep of groups")
    sp.add_argument(
        "--identity",
        action="append",
        default=None,
        help=f"identity to check (repeatable); one of {', '.join(ALL_IDENTITIES)}",
    )
    sp.add_argument("--trials", type=int, default=25, help="random cases per sampled identity")
    sp.add_argument(
        "--groups", type=str, default=None, help="groups to sweep, e.g. '2,3,2x2' (default: built-in sweep)"
    )
    sp.add_argument("--echo", action="store_true", help="include a sample state dump in the report")
    _add_common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("css", help="build a code and check its correction guarantees")
    sp.add_argument("--sweep", action="store_true", help="exhaustively round-trip all in-bound errors")
    sp.add_argument("--kl", action="store_true", help="check pairwise error correctability")
    sp.add_argument("--max-wt1", type=int, default=None, help="bit-error weight bound (default t1)")
    sp.add_argument("--max-wt2", type=int, default=None, help="phase-error weight bound (default t2)")
    _add_common(sp, config_flag=True)
    sp.set_defaults(func=cmd_css)

    sp = sub.add_parser("qkd", help="run key-distribution trials and report statistics")
    sp.add_argument(
        "--protocol", type=str, required=True, choices=("cssg", "bb84g"), help="protocol variant"
    )
    sp.add_argument("--trials", type=int, default=100, help="number of independent trials")
    sp.add_argument("--delta", type=float, default=1.0, help="transmission overhead factor")
    sp.add_argument("--t-check", type=int, default=None, help="abort threshold (default: code t1)")
    sp.add_argument("--p-x", type=float, default=0.0, help="per-position bit fault probability")
    sp.add_argument("--p-z", type=float, default=0.0, help="per-position phase fault probability")
    sp.add_argument(
        "--eve", type=str, default="none", choices=("none", "intercept"), help="eavesdropper model"
    )
    sp.add_argument(
        "--transcripts", type=str, default=None, help="write per-trial transcripts to this JSONL path"
    )
    _add_common(sp, config_flag=True)
    sp.set_defaults(func=cmd_qkd)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        seed = _resolve_seed(args)
        return args.func(args, seed)
    except ResourceLimitError as exc:
        print(f"{TOOL_NAME}: resource limit: {exc}", file=sys.stderr)
        return 3
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"{TOOL_NAME}: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    """Console-script entry point."""
    sys.exit(main())
