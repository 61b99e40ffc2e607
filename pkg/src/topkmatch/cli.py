"""Command-line surface.

Exit codes: 0 = affirmative / success, 1 = negative answer (not NPO / no
matching exists / ...), 2 = usage or input error.  Results go to stdout as
JSON.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import elicitation, io_json, npo, nrm
from .core import FullProfile, InvalidInputError, TopKProfile, signature_of
from .elicitation import (
    ExperimentConfig,
    NpoLowerBoundParams,
    NrmLowerBoundParams,
    StaticOracle,
    elicit_naive,
    elicit_npo,
    gen_npo_lb_instance,
    gen_nrm_lb_instance,
    run_competitive_experiment,
)
from .io_json import ParseError
from .nrm import SigOptQuery


def _load_instance(path: str) -> io_json.InstanceDocument:
    with open(path, encoding="utf-8") as fh:
        return io_json.parse_instance(fh.read())


def _load_matching(path: str, doc: io_json.InstanceDocument):
    with open(path, encoding="utf-8") as fh:
        return io_json.parse_matching(fh.read(), doc)


def _topk(doc: io_json.InstanceDocument) -> TopKProfile:
    p = doc.profile
    if isinstance(p, FullProfile):
        return TopKProfile(p.n, p.prefs)
    return p


def cmd_check_npo(args) -> int:
    doc = _load_instance(args.instance)
    M = _load_matching(args.matching, doc)
    ok = npo.check_npo(_topk(doc), M)
    print(json.dumps({"npo": ok}))
    return 0 if ok else 1


def cmd_check_nrm(args) -> int:
    doc = _load_instance(args.instance)
    M = _load_matching(args.matching, doc)
    ok = nrm.check_nrm(_topk(doc), M)
    print(json.dumps({"nrm": ok}))
    return 0 if ok else 1


def cmd_exists_npo(args) -> int:
    doc = _load_instance(args.instance)
    M = npo.exists_npo(_topk(doc))
    if M is None:
        print(json.dumps({"exists": False}))
        return 1
    print(
        json.dumps(
            {
                "exists": True,
                "assignment": {
                    doc.agents[a]: doc.objects[o] for a, o in sorted(M.pairs)
                },
            }
        )
    )
    return 0


def cmd_exists_nrm(args) -> int:
    doc = _load_instance(args.instance)
    P = _topk(doc)
    M = nrm.exists_nrm(P)
    if M is None:
        print(json.dumps({"exists": False}))
        return 1
    print(
        json.dumps(
            {
                "exists": True,
                "assignment": {
                    doc.agents[a]: doc.objects[o] for a, o in sorted(M.pairs)
                },
                "signature": list(signature_of(M, P)),
            }
        )
    )
    return 0


def cmd_sig_opt(args) -> int:
    doc = _load_instance(args.instance)
    P = _topk(doc)
    forbidden = []
    for pair in args.forbid or []:
        try:
            aname, oname = pair.split(":", 1)
        except ValueError:
            raise ParseError(f"bad --forbid entry {pair!r}, want agent:object")
        forbidden.append((doc.agent_index(aname), doc.object_index(oname)))
    sig, M = nrm.sig_opt(P, SigOptQuery.whole_instance(P.n, forbidden))
    print(
        json.dumps(
            {
                "signature": list(sig),
                "witness": {
                    doc.agents[a]: doc.objects[o] for a, o in sorted(M.pairs)
                },
            }
        )
    )
    return 0


def cmd_elicit(args) -> int:
    doc = _load_instance(args.instance)
    if not isinstance(doc.profile, FullProfile):
        raise ParseError("elicit needs a full profile as ground truth")
    oracle = StaticOracle(doc.profile)
    if args.algorithm == "algo":
        M, transcript = elicit_npo(oracle, doc.n)
    else:
        M, transcript = elicit_naive(oracle, doc.n, args.goal)
    print(
        json.dumps(
            {
                "assignment": {
                    doc.agents[a]: doc.objects[o] for a, o in sorted(M.pairs)
                },
                "total_queries": transcript.total,
                "per_agent": transcript.per_agent_counts(),
                "s_rounds": transcript.s_rounds,
                "events": [
                    {
                        "round": r,
                        "agent": doc.agents[a],
                        "position": pos,
                        "object": doc.objects[o],
                    }
                    for r, a, pos, o in transcript.events
                ],
            }
        )
    )
    return 0


def cmd_gen_lb(args) -> int:
    if args.kind == "npo":
        if not args.t:
            raise ParseError("gen-lb npo needs --t")
        t = tuple(int(x) for x in args.t.split(","))
        truth = gen_npo_lb_instance(NpoLowerBoundParams(args.n, t))
    else:
        if not args.specials:
            raise ParseError("gen-lb nrm needs --specials")
        bits = tuple(x in ("1", "first", "true") for x in args.specials.split(","))
        truth = gen_nrm_lb_instance(NrmLowerBoundParams(args.n, bits))
    print(io_json.serialize_instance(io_json.document_for(truth)))
    return 0


def cmd_bench(args) -> int:
    config = ExperimentConfig(
        family=args.family,
        goal=args.goal,
        strategy=args.strategy,
        sizes=tuple(int(x) for x in args.sizes.split(",")),
        trials=args.trials,
        seed=args.seed,
        adaptive=not args.static,
    )
    report = run_competitive_experiment(config)
    for record in report["records"]:
        print(json.dumps(record))
    print(json.dumps({"summary": report["summary"]}))
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(log_dir=args.log_dir)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="topkmatch",
        description="NPO/NRM matchings from top-k preferences",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-npo", help="is a matching necessarily Pareto optimal?")
    p.add_argument("--instance", required=True)
    p.add_argument("--matching", required=True)
    p.set_defaults(func=cmd_check_npo)

    p = sub.add_parser("check-nrm", help="is a matching necessarily rank-maximal?")
    p.add_argument("--instance", required=True)
    p.add_argument("--matching", required=True)
    p.set_defaults(func=cmd_check_nrm)

    p = sub.add_parser("exists-npo", help="find an NPO matching if one exists")
    p.add_argument("--instance", required=True)
    p.set_defaults(func=cmd_exists_npo)

    p = sub.add_parser("exists-nrm", help="find an NRM matching if one exists")
    p.add_argument("--instance", required=True)
    p.set_defaults(func=cmd_exists_nrm)

    p = sub.add_parser("sig-opt", help="best achievable signature and a witness")
    p.add_argument("--instance", required=True)
    p.add_argument("--forbid", action="append", metavar="AGENT:OBJECT")
    p.set_defaults(func=cmd_sig_opt)

    p = sub.add_parser("elicit", help="run an elicitation engine on stored truth")
    p.add_argument("--instance", required=True)
    p.add_argument("--goal", choices=["npo", "nrm"], default="npo")
    p.add_argument("--algorithm", choices=["algo", "naive"], default="algo")
    p.set_defaults(func=cmd_elicit)

    p = sub.add_parser("gen-lb", help="emit a lower-bound family instance")
    p.add_argument("kind", choices=["npo", "nrm"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", help="comma-separated block positions (npo)")
    p.add_argument("--specials", help="comma-separated 0/1 bits (nrm)")
    p.set_defaults(func=cmd_gen_lb)

    p = sub.add_parser("bench", help="competitive-ratio experiment harness")
    p.add_argument("--family", choices=["npo-lb", "nrm-lb", "random"], required=True)
    p.add_argument("--goal", choices=["npo", "nrm"], default="npo")
    p.add_argument("--strategy", choices=["algo", "naive"], default="algo")
    p.add_argument("--sizes", required=True, help="comma-separated n values")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--static", action="store_true", help="static oracle instead of adaptive")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("serve", help="run the live elicitation session service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--log-dir", default="./session-logs")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ParseError, InvalidInputError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
