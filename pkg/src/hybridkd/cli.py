"""Command-line entry point: ``hybridkd <subcommand> ...``."""

from __future__ import annotations

import argparse
import hashlib
import sys
from pathlib import Path

from . import kms, linkrates, ratecalc, vulnset
from .gfss.lincode import CodeError, lc_deal, lc_minimal_access, lc_recover, lc_recovery_vector
from .gfss.shamir import MAX_ENUMERATION, SchemeError, ThresholdScheme, shamir_deal, shamir_leakage_check, shamir_recover
from .netgraph import NetworkError, parse_code, parse_network, validate_tree
from .simexec import InsufficientKeyMaterial, attack, execute


class CliError(Exception):
    """A domain error reported on stderr with exit code 1."""


def _load_network(path: str):
    return parse_network(_read(path))


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise CliError(f"cannot read {path}: {exc}") from None


def _id_list(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def _check_compromise(ids, graph, tree) -> frozenset:
    ends = set(validate_tree(tree, graph))
    known = set(graph.nodes) | {link.id for link in graph.links}
    for x in ids:
        if x not in known:
            raise CliError(f"unknown element {x!r}")
        if x in ends:
            raise CliError(f"{x!r} is an end user; end users are trusted")
    return frozenset(ids)


def _fmt_rate(bps: float) -> str:
    return f"{bps:.5e}"


# -- subcommands ----------------------------------------------------------------


def cmd_rate(args) -> None:
    graph, tree = _load_network(args.net)
    print(_fmt_rate(ratecalc.protocol_rate(tree, graph)))


def cmd_vulns(args) -> None:
    graph, tree = _load_network(args.net)
    v_min = vulnset.protocol_vuln(tree, graph)
    if args.summary:
        size, count = vulnset.security_summary(v_min)
        print(f"min_attack_size={size} vuln_count={count}")
        return
    for line in vulnset.format_set(v_min):
        print(line)


def cmd_attack(args) -> None:
    graph, tree = _load_network(args.net)
    compromised = _check_compromise(_id_list(args.compromise), graph, tree)
    ex = execute(tree, graph, args.seed, args.rounds)
    print("COMPROMISED" if attack(ex, compromised).success else "SAFE")


def cmd_simulate(args) -> None:
    graph, tree = _load_network(args.net)
    ex = execute(tree, graph, args.seed, args.rounds)
    print(f"key_bits {ex.key_length}")
    print(f"endpoints_agree {'yes' if ex.alice_key == ex.bob_key else 'no'}")
    print(f"digest {ex.digest()}")
    print("link,supplied_bits,consumed_bits")
    for link_id in sorted(ex.link_vars):
        print(f"{link_id},{ex.link_vars[link_id][1]},{ex.consumed[link_id]}")


def cmd_qkd_curve(args) -> None:
    params = linkrates.QKD_PRESETS.get(args.preset)
    if params is None:
        raise CliError(f"unknown QKD preset {args.preset!r}; choose from {sorted(linkrates.QKD_PRESETS)}")
    sys.stdout.write(linkrates.curve_csv(linkrates.rate_curve(params, args.min, args.max, args.step)))


def cmd_kem_rate(args) -> None:
    params = linkrates.KEM_PRESETS.get(args.preset)
    if params is None:
        raise CliError(f"unknown KEM preset {args.preset!r}; choose from {sorted(linkrates.KEM_PRESETS)}")
    print(_fmt_rate(linkrates.kem_rate(params)))


def cmd_lc_access(args) -> None:
    code = parse_code(_read(args.code))
    report = lc_minimal_access(code)
    print(f"code q={code.q} n={code.n} k={code.k}")
    print("minimal_access_sets")
    for s in report.sorted_sets():
        print(vulnset.format_vuln(str(i) for i in s))
    print("dictatorial " + (",".join(map(str, report.dictatorial)) or "none"))
    for s in report.sorted_sets():
        v = lc_recovery_vector(code, s)
        print(f"recovery {vulnset.format_vuln(str(i) for i in s)} -> [{','.join(map(str, v))}]")
    if report.sorted_sets():
        deal = lc_deal(code, 1 % code.q, 0)
        s = report.sorted_sets()[0]
        got = lc_recover(code, {j: deal.codeword[j] for j in s})
        print(f"check codeword=({','.join(map(str, deal.codeword))}) recovered={got}")


def cmd_ss_demo(args) -> None:
    scheme = ThresholdScheme.make(args.q, args.n, args.g)
    deal = shamir_deal(scheme, args.seed)
    print(f"scheme q={args.q} n={args.n} g={args.g} t={scheme.t} delta={scheme.delta}")
    print(f"polynomial {list(deal.coeffs)}")
    print(f"secret {list(deal.secret)} at x={list(scheme.secret_inputs)}")
    print(f"shares {list(deal.shares)} at x={list(scheme.share_inputs)}")
    recovered = shamir_recover(scheme, deal.points())
    print(f"recovered {list(recovered)} ok={'yes' if tuple(recovered) == tuple(deal.secret) else 'no'}")
    if args.q**scheme.t > MAX_ENUMERATION:
        print("leakage skipped (too many polynomials to enumerate)")
        return
    rep = shamir_leakage_check(scheme, args.n - 1, args.seed)
    verdict = "uniform" if rep.joint_uniform() else ("per-coordinate uniform" if rep.coordinate_uniform() else "leaks")
    print(f"leakage exposed={args.n - 1} consistent_polynomials={rep.consistent} secret={verdict}")
    full = shamir_leakage_check(scheme, args.n, args.seed)
    print(f"leakage exposed={args.n} determined={'yes' if full.determined() else 'no'}")


def cmd_kms(args) -> None:
    t = kms.kms_run(args.n, args.bits, args.seed)
    h = hashlib.sha256()
    for m in t.announcements + [t.bob_message]:
        h.update(bytes(m))
    print(f"relays {args.n} bits {args.bits}")
    print(f"transcript_digest {h.hexdigest()}")
    print(f"recovery {'ok' if t.recovered == t.s else 'FAILED'}")
    if args.compromise is None:
        return
    ids = _id_list(args.compromise)
    bad = [x for x in ids if x not in t.instance.universe]
    if bad:
        raise CliError(f"unknown KMS element(s) {bad}; elements are {t.instance.universe}")
    res = kms.kms_attack(t, ids)
    formula = vulnset.is_compromised(kms.kms_vuln(args.n), ids)
    print(f"oracle {'COMPROMISED' if res.success else 'SAFE'}")
    print(f"formula {'COMPROMISED' if formula else 'SAFE'}")
    if res.success != formula:
        amended = vulnset.is_compromised(kms.kms_vuln(args.n, amended=True), ids)
        print(f"mismatch amended_formula {'COMPROMISED' if amended else 'SAFE'}")
    if res.success and res.s != t.s:
        raise CliError("internal error: recovered key differs from s")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hybridkd", description="Hybrid QKD/PQC key-distribution analysis.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("rate", help="end-to-end protocol rate in bps")
    s.add_argument("net")
    s.set_defaults(func=cmd_rate)

    s = sub.add_parser("vulns", help="minimal vulnerability set")
    s.add_argument("net")
    s.add_argument("--summary", action="store_true")
    s.set_defaults(func=cmd_vulns)

    s = sub.add_parser("attack", help="execute the protocol and attack it")
    s.add_argument("net")
    s.add_argument("--compromise", required=True, help="comma-separated element ids")
    s.add_argument("--rounds", type=int, default=512)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_attack)

    s = sub.add_parser("simulate", help="bit-level execution with consumption ledger")
    s.add_argument("net")
    s.add_argument("--rounds", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("qkd-curve", help="QKD rate against distance as CSV")
    s.add_argument("--preset", required=True)
    s.add_argument("--min", type=float, required=True)
    s.add_argument("--max", type=float, required=True)
    s.add_argument("--step", type=float, required=True)
    s.set_defaults(func=cmd_qkd_curve)

    s = sub.add_parser("kem-rate", help="KEM key rate in bps")
    s.add_argument("--preset", required=True)
    s.set_defaults(func=cmd_kem_rate)

    s = sub.add_parser("lc-access", help="access structure of a linear-code scheme")
    s.add_argument("code")
    s.set_defaults(func=cmd_lc_access)

    s = sub.add_parser("ss-demo", help="threshold deal, recovery and leakage check")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--g", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_ss_demo)

    s = sub.add_parser("kms", help="relay protocol through a central key-management node")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--bits", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--compromise", default=None)
    s.set_defaults(func=cmd_kms)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (CliError, NetworkError, CodeError, SchemeError, InsufficientKeyMaterial, ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
