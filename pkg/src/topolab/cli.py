"""Command-line front end: every operation behind deterministic subcommands.

All numeric I/O is exact ("p/q" rationals, CNF ordinals, bracketed digit
lists); runs are reproducible byte for byte given the same flags and seeds.
Exit codes: 0 pass/success, 1 audit or domain failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import __version__
from .euclid import EOpenSet
from .seqcore import BaireAlgebra, baire_standard_base, validate_strict_lusin
from .sorgenfrey import (
    SOpenSet,
    SorgenfreyAlgebra,
    address,
    make_pi_base,
    make_pi_base_with_endpoints,
)
from .polish import BallFamily, OpenMap, ball_family_audit, presentation, solve_preimage, eval_h
from .games import (
    ClosedMarginHalvingII,
    EuclidSpace,
    HalvingChoquetI,
    RandomStrongI,
    Run,
    SorgenfreySpace,
    SorgenfreyStrongII,
    StrictFromChoquetII,
    audit_run,
    play,
)
from .fiber import Certificate, amplify, check_certificate, verify_amplifier
from .scattered import (
    build_closed_open_map,
    cantor_scheme,
    cb_analyze,
    eval_map,
    thirds_oracle,
    validate_cantor_scheme,
    verify_map,
)


def _frac(text: str) -> Fraction:
    return Fraction(text)


def _fmt(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def report(kind: str, payload: dict, inputs: dict) -> dict:
    return {"kind": kind, "version": __version__, "inputs": inputs, "payload": payload}


def export_json(rep: dict) -> bytes:
    return (json.dumps(rep, separators=(",", ":"), ensure_ascii=True) + "\n").encode()


def export_csv(rep: dict) -> bytes:
    """Flat row export for certificates, runs, and level listings."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    kind = rep["kind"]
    payload = rep["payload"]
    if kind == "certificate":
        writer.writerow(["stem", "common_image"])
        for stem in payload["stems"]:
            writer.writerow([stem, payload["common_image"]])
    elif kind == "run":
        writer.writerow(["round", "player", "set", "point"])
        for row in payload["moves"]:
            writer.writerow([row["n"], row["player"], " u ".join(row["set"]), row.get("point", "")])
    elif kind == "cb-report":
        writer.writerow(["alpha", "description", "sample"])
        for lv in payload["levels"]:
            writer.writerow([lv["alpha"], lv["description"], " ".join(lv["sample"])])
    else:
        writer.writerow(["key", "value"])
        for k, v in payload.items():
            writer.writerow([k, json.dumps(v, separators=(",", ":"))])
    return buf.getvalue().encode()


def emit(rep: dict, fmt: str, out_path: str | None) -> None:
    data = export_json(rep) if fmt == "json" else export_csv(rep)
    if out_path:
        with open(out_path, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)


def _scheme_by_name(name: str, endpoints: str | None):
    if name == "baire":
        return baire_standard_base(), BaireAlgebra()
    if name == "pi-base":
        return make_pi_base(), SorgenfreyAlgebra()
    if name == "pi-base-endpoints":
        pts = [Fraction(t) for t in endpoints.split(",")] if endpoints else []
        return make_pi_base_with_endpoints(pts), SorgenfreyAlgebra()
    if name == "overlap-demo":
        # intentionally broken sibling pair, for exercising failure paths
        from .seqcore import SchemeRule

        box = SOpenSet.interval(0, 1)
        kids = [SOpenSet.interval(0, Fraction(2, 3)), SOpenSet.interval(Fraction(1, 2), 1)]

        def child(payload, n):
            return kids[n % 2]

        rule = SchemeRule(root=box, child=child, label="overlap-demo",
                          tail=lambda payload, bound: SOpenSet.empty())
        return rule, SorgenfreyAlgebra(universe=box)
    raise SystemExit(f"unknown scheme {name!r}")


def cmd_scheme(args) -> int:
    if args.op == "audit":
        rule, algebra = _scheme_by_name(args.scheme, args.endpoints)
        audit = validate_strict_lusin(rule, algebra, args.depth, args.bound)
        rep = report("audit", audit.to_payload(),
                     {"scheme": args.scheme, "depth": args.depth, "bound": args.bound})
        emit(rep, args.format, args.out)
        return 0 if audit.passed else 1
    if args.op == "address":
        rule, _ = _scheme_by_name(args.scheme, args.endpoints)
        addr = address(_frac(args.q), rule, args.depth)
        node = rule.as_set(rule.node(addr))
        rep = report("evaluation",
                     {"address": addr.serialize(), "interval": node.serialize()},
                     {"scheme": args.scheme, "q": args.q, "depth": args.depth})
        emit(rep, args.format, args.out)
        return 0
    raise SystemExit(2)


def cmd_map(args) -> int:
    if args.op == "eval":
        open_map = OpenMap(args.target)
        val, err = open_map.eval(_frac(args.q), args.k)
        rep = report("evaluation", {"point": _fmt(val), "err": _fmt(err)},
                     {"q": args.q, "target": args.target, "k": args.k})
        emit(rep, args.format, args.out)
        return 0
    if args.op == "preimage":
        family = BallFamily(presentation(args.target))
        addr = solve_preimage(family, _frac(args.y), args.k, args.bound)
        val, err = eval_h(family, addr, args.k)
        rep = report("evaluation",
                     {"address": addr.serialize(), "point": _fmt(val), "err": _fmt(err)},
                     {"y": args.y, "target": args.target, "k": args.k, "bound": args.bound})
        emit(rep, args.format, args.out)
        return 0
    if args.op == "audit-balls":
        family = BallFamily(presentation(args.target))
        audit = ball_family_audit(family, args.depth, args.bound, _frac(args.net))
        rep = report("audit", audit.to_payload(),
                     {"target": args.target, "depth": args.depth,
                      "bound": args.bound, "net": args.net})
        emit(rep, args.format, args.out)
        return 0 if audit.passed else 1
    raise SystemExit(2)


def _strategy_i(spec: str, space_label: str):
    name, _, seed = spec.partition(":")
    if name == "random":
        if not seed:
            raise SystemExit("random adversaries need a seed, e.g. random:7")
        return RandomStrongI(int(seed))
    if name == "halving":
        return HalvingChoquetI()
    raise SystemExit(f"unknown player-I strategy {spec!r}")


def _strategy_ii(spec: str, space):
    if spec == "midpoint":
        return SorgenfreyStrongII()
    if spec == "margin":
        return ClosedMarginHalvingII()
    if spec == "strict-margin":
        return StrictFromChoquetII(ClosedMarginHalvingII())
    raise SystemExit(f"unknown player-II strategy {spec!r}")


def _space_by_name(name: str):
    if name == "sorgenfrey":
        return SorgenfreySpace()
    if name == "euclid":
        return EuclidSpace()
    raise SystemExit(f"unknown space {name!r}")


def cmd_game(args) -> int:
    space = _space_by_name(args.space)
    if args.op == "play":
        run = play(args.kind, space, _strategy_i(args.pi, args.space),
                   _strategy_ii(args.pii, space), args.rounds)
        tol = _frac(args.tolerance) if args.tolerance else None
        audit = audit_run(run, space, tol)
        payload = run.to_payload(space)
        payload["audit"] = audit.to_payload()
        rep = report("run", payload,
                     {"kind": args.kind, "space": args.space, "pi": args.pi,
                      "pii": args.pii, "rounds": args.rounds})
        emit(rep, args.format, args.out)
        return 0 if (run.violation is None and audit.passed) else 1
    if args.op == "audit":
        with open(args.run, "rb") as fh:
            saved = json.loads(fh.read())
        run = Run.from_payload(saved["payload"], space)
        tol = _frac(args.tolerance) if args.tolerance else None
        audit = audit_run(run, space, tol)
        rep = report("audit", audit.to_payload(), {"run": args.run, "space": args.space})
        emit(rep, args.format, args.out)
        return 0 if audit.passed else 1
    raise SystemExit(2)


def cmd_fiber(args) -> int:
    if args.op == "amplify":
        state = amplify(args.depth)
        cert = verify_amplifier(state)
        rep = report("certificate", cert.to_payload(), {"depth": args.depth})
        emit(rep, args.format, args.out)
        return 0
    if args.op == "verify":
        if args.certificate:
            with open(args.certificate, "rb") as fh:
                saved = json.loads(fh.read())
            cert = Certificate.from_payload(saved["payload"])
            try:
                check_certificate(cert)
                ok = True
                note = "certificate re-check passed"
            except ValueError as exc:
                ok = False
                note = str(exc)
            rep = report("audit", {"passed": ok, "note": note},
                         {"certificate": args.certificate})
            emit(rep, args.format, args.out)
            return 0 if ok else 1
        state = amplify(args.depth)
        cert = verify_amplifier(state)
        check_certificate(cert)
        rep = report("audit",
                     {"passed": True, "pieces": len(cert.stems),
                      "common_image": cert.image.serialize()},
                     {"depth": args.depth})
        emit(rep, args.format, args.out)
        return 0
    raise SystemExit(2)


def cmd_cb(args) -> int:
    if args.op == "analyze":
        rep_obj = cb_analyze(args.ordinal, truncation=args.truncation)
        rep = report("cb-report", rep_obj.to_payload(),
                     {"ordinal": args.ordinal, "truncation": args.truncation})
        emit(rep, args.format, args.out)
        ok = rep_obj.brute_agrees in (None, True)
        return 0 if ok else 1
    domain = SOpenSet.parse(args.domain.split(";"))
    tree = build_closed_open_map(domain, args.ordinal)
    if args.op == "build-map":
        payload = _describe_tree(tree, args.bound)
        rep = report("evaluation", payload,
                     {"ordinal": args.ordinal, "domain": args.domain, "bound": args.bound})
        emit(rep, args.format, args.out)
        return 0
    if args.op == "eval-map":
        val = eval_map(tree, _frac(args.q))
        rep = report("evaluation", {"value": val.serialize()},
                     {"ordinal": args.ordinal, "domain": args.domain, "q": args.q})
        emit(rep, args.format, args.out)
        return 0
    if args.op == "verify-map":
        import random

        rng = random.Random(args.seed)
        samples = []
        lo_probe = Fraction(0)
        for _ in range(args.samples):
            num = rng.randrange(0, 1000)
            den = rng.randrange(num + 1, 1200)
            samples.append(Fraction(num, den))
        samples = [q for q in samples if domain.contains(q)] or [lo_probe]
        result = verify_map(tree, samples, args.bound)
        rep = report("audit", result.to_payload(),
                     {"ordinal": args.ordinal, "domain": args.domain,
                      "samples": args.samples, "seed": args.seed, "bound": args.bound})
        emit(rep, args.format, args.out)
        return 0 if result.passed else 1
    raise SystemExit(2)


def _describe_tree(tree, bound: int) -> dict:
    from .scattered import MapLeaf, MapNode, MapSum

    if isinstance(tree, MapLeaf):
        return {"node": "leaf", "domain": tree.domain.serialize(),
                "value": tree.value.serialize()}
    if isinstance(tree, MapSum):
        return {"node": "sum", "domain": tree.domain.serialize(),
                "parts": [_describe_tree(sub, max(bound // 2, 1)) for _, sub in tree.parts]}
    node: "MapNode" = tree
    children = []
    for n in range(min(bound, 6)):
        children.append({
            "n": n,
            "domain": node.piece_domain(n).serialize(),
            "target": node.piece_interval(n).serialize(),
        })
    return {
        "node": "limit",
        "domain": node.domain.serialize(),
        "target": node.target.serialize(),
        "z0": _fmt(node.z0),
        "y0": node.y0.serialize(),
        "children": children,
    }


def cmd_cantor(args) -> int:
    u_set = EOpenSet.interval(_frac(args.u_lo), _frac(args.u_hi))
    segments = cantor_scheme(thirds_oracle, lambda n: u_set, args.depth,
                             (_frac(args.lo), _frac(args.hi)))
    validate_cantor_scheme(segments, lambda n: u_set, args.depth)
    leaves = [segments[addr].serialize() for addr in sorted(segments, key=lambda a: a.digits)
              if len(addr) == args.depth]
    rep = report("certificate",
                 {"depth": args.depth, "segments": len(segments), "leaves": leaves},
                 {"lo": args.lo, "hi": args.hi, "u": [args.u_lo, args.u_hi],
                  "depth": args.depth})
    emit(rep, args.format, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="topolab", description=__doc__)
    top.add_argument("--version", action="version", version=__version__)
    sub = top.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", default=None, help="output path (default: stdout)")

    p = sub.add_parser("scheme", help="Lusin scheme audits and addressing")
    ps = p.add_subparsers(dest="op", required=True)
    q = ps.add_parser("audit")
    q.add_argument("--scheme", default="pi-base",
                   choices=("baire", "pi-base", "pi-base-endpoints", "overlap-demo"))
    q.add_argument("--depth", type=int, default=4)
    q.add_argument("--bound", type=int, default=8)
    q.add_argument("--endpoints", default=None, help="comma list of p/q points")
    common(q)
    q = ps.add_parser("address")
    q.add_argument("--scheme", default="pi-base",
                   choices=("pi-base", "pi-base-endpoints"))
    q.add_argument("--q", required=True)
    q.add_argument("--depth", type=int, default=4)
    q.add_argument("--endpoints", default=None)
    common(q)

    p = sub.add_parser("map", help="open map onto a presented Polish space")
    ps = p.add_subparsers(dest="op", required=True)
    q = ps.add_parser("eval")
    q.add_argument("--q", required=True)
    q.add_argument("--target", default="reals-capped")
    q.add_argument("--k", type=int, default=8)
    common(q)
    q = ps.add_parser("preimage")
    q.add_argument("--y", required=True)
    q.add_argument("--target", default="reals-capped")
    q.add_argument("--k", type=int, default=8)
    q.add_argument("--bound", type=int, default=64)
    common(q)
    q = ps.add_parser("audit-balls")
    q.add_argument("--target", default="reals-capped")
    q.add_argument("--depth", type=int, default=3)
    q.add_argument("--bound", type=int, default=12)
    q.add_argument("--net", default="1/32")
    common(q)

    p = sub.add_parser("game", help="Choquet-family game engine")
    ps = p.add_subparsers(dest="op", required=True)
    q = ps.add_parser("play")
    q.add_argument("--kind", choices=("choquet", "strong", "strict"), required=True)
    q.add_argument("--space", choices=("sorgenfrey", "euclid"), required=True)
    q.add_argument("--pi", required=True, help="player I strategy, e.g. random:7 or halving")
    q.add_argument("--pii", required=True, help="player II strategy: midpoint, margin, strict-margin")
    q.add_argument("--rounds", type=int, default=10)
    q.add_argument("--tolerance", default=None, help="strict proxy tolerance p/q")
    common(q)
    q = ps.add_parser("audit")
    q.add_argument("--run", required=True, help="a saved `game play` JSON report")
    q.add_argument("--space", choices=("sorgenfrey", "euclid"), required=True)
    q.add_argument("--tolerance", default=None)
    common(q)

    p = sub.add_parser("fiber", help="cover refinement and amplification")
    ps = p.add_subparsers(dest="op", required=True)
    q = ps.add_parser("amplify")
    q.add_argument("--depth", type=int, required=True)
    common(q)
    q = ps.add_parser("verify")
    q.add_argument("--depth", type=int, default=3)
    q.add_argument("--certificate", default=None, help="re-check a saved certificate")
    common(q)

    p = sub.add_parser("cb", help="Cantor-Bendixson analysis and map compilation")
    ps = p.add_subparsers(dest="op", required=True)
    q = ps.add_parser("analyze")
    q.add_argument("--ordinal", required=True, help='point count, e.g. "w^2+1"')
    q.add_argument("--truncation", type=int, default=0)
    common(q)
    for name in ("build-map", "eval-map", "verify-map"):
        q = ps.add_parser(name)
        q.add_argument("--ordinal", required=True)
        q.add_argument("--domain", default="[0/1, 1/1)",
                       help='clopen domain, components joined by ";"')
        if name == "eval-map":
            q.add_argument("--q", required=True)
        if name == "verify-map":
            q.add_argument("--samples", type=int, default=200)
            q.add_argument("--seed", type=int, required=True)
        q.add_argument("--bound", type=int, default=20)
        common(q)

    p = sub.add_parser("cantor", help="nested segment schemes")
    ps = p.add_subparsers(dest="op", required=True)
    q = ps.add_parser("scheme")
    q.add_argument("--depth", type=int, default=3)
    q.add_argument("--lo", default="0/1")
    q.add_argument("--hi", default="1/1")
    q.add_argument("--u-lo", default="-1/1")
    q.add_argument("--u-hi", default="2/1")
    common(q)

    return top


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "scheme": cmd_scheme,
        "map": cmd_map,
        "game": cmd_game,
        "fiber": cmd_fiber,
        "cb": cmd_cb,
        "cantor": cmd_cantor,
    }
    try:
        return handlers[args.command](args)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
