"""Operator and experimenter surface.

Subcommands:

    bootstrap      extract face crops into an index (jack or jill mode)
    register       create an account registration from an index or synthetic ids
    auth-sim       solver-driven end-to-end authentications, local or over HTTP
    attack-sim     shoulder-surfing observer simulation across sessions
    effort-report  user-action accounting vs. a typed-password baseline
    unlock         administrative lockout reset
    serve          run the HTTP service

Reports print as JSON (``--output json``, byte-stable for a fixed seed and
flags) or as plain tables carrying exactly the same numbers.
"""

import argparse
import json
import os
import statistics
import sys
from pathlib import Path
from typing import Optional, Sequence

from .errors import GridlockError, IntegrityError, IoError, ValidationError
from .observer import (
    DEFAULT_PASSWORD_BASELINE_ACTIONS,
    PRIOR_BITS,
    SECRET_SPACE,
    keyboard_baseline,
    effort_report,
    simulate_attacker,
    synthetic_image_ids,
    synthetic_registration,
)

DEFAULT_SEED = 42
NOT_REACHED = "not reached"


class CliUsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as exit code 1, not 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise CliUsageError(message)


def _data_dir(args) -> Path:
    return Path(args.data_dir or os.environ.get("DATA_DIR", "./data"))


def _emit(payload: dict, fmt: str, table_lines: list[str]) -> None:
    if fmt == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print("\n".join(table_lines))


def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".4f")
    return str(value)


def _kv_table(rows: list[tuple[str, object]]) -> list[str]:
    width = max(len(k) for k, _ in rows)
    return [f"{k.ljust(width)}  {_fmt(v)}" for k, v in rows]


# ---------------------------------------------------------------------------
# bootstrap
# ---------------------------------------------------------------------------


def _cmd_bootstrap(args) -> int:
    from .bootstrap.manifest import ingest_tags
    from .bootstrap.pipeline import (
        MODE_DETECTOR,
        MODE_TAGS,
        PipelineConfig,
        collect_events,
        load_friends_file,
        run_pipeline,
        scan_corpus,
        write_face_index,
    )

    output_dir = Path(args.output_dir)
    if args.mode == MODE_TAGS:
        if not args.manifest:
            raise ValidationError("jill mode needs --manifest")
        outcome = ingest_tags(args.manifest, output_dir, workers=args.workers)
    else:
        if args.friends:
            friends = load_friends_file(args.friends)
        elif args.corpus:
            friends = scan_corpus(args.corpus)
        else:
            raise ValidationError("jack mode needs --corpus or --friends")
        config = PipelineConfig(
            mode=MODE_DETECTOR, output_dir=output_dir, workers=args.workers
        )
        outcome = collect_events(run_pipeline(config, friends))
    index_path = write_face_index(output_dir, outcome.faces)
    payload = {
        "mode": args.mode,
        "faces": len(outcome.faces),
        "skipped": [s.to_dict() for s in outcome.skipped],
        "index": str(index_path),
    }
    rows = [
        ("mode", args.mode),
        ("faces", len(outcome.faces)),
        ("skipped", len(outcome.skipped)),
        ("index", str(index_path)),
    ]
    lines = _kv_table(rows)
    for skip in outcome.skipped:
        lines.append(f"  skipped {skip.friend_name}: {skip.reason}")
    _emit(payload, args.output, lines)
    return 0


# ---------------------------------------------------------------------------
# register / unlock
# ---------------------------------------------------------------------------


def _load_index_ids(path: str) -> list[str]:
    from .bootstrap.pipeline import load_face_index

    return [entry["image_id"] for entry in load_face_index(path)]


def _cmd_register(args) -> int:
    from .store import AccountStore

    if args.synthetic:
        ids = synthetic_image_ids()
    elif args.index:
        ids = _load_index_ids(args.index)
    else:
        raise ValidationError("register needs --index or --synthetic")

    if args.secret:
        secret = tuple(s.strip() for s in args.secret.split(","))
    else:
        import numpy as np

        rng = np.random.default_rng([args.seed, 1])
        picks = rng.choice(len(ids), size=4, replace=False)
        secret = tuple(sorted(ids)[int(i)] for i in picks)

    store = AccountStore(_data_dir(args))
    account = store.create(args.account)
    account.set_registration(ids, secret)
    store.save(account)
    payload = {"account_id": account.account_id, "images": len(ids), "registered": True}
    _emit(
        payload,
        args.output,
        _kv_table([("account_id", account.account_id), ("images", len(ids))]),
    )
    return 0


def _cmd_unlock(args) -> int:
    from .store import AccountStore

    store = AccountStore(_data_dir(args))
    with store.lock(args.account):
        account = store.get(args.account)
        account.unlock()
        store.save(account)
    payload = {"account_id": args.account, "locked": False}
    _emit(payload, args.output, _kv_table([("account_id", args.account), ("locked", False)]))
    return 0


# ---------------------------------------------------------------------------
# auth-sim
# ---------------------------------------------------------------------------


def _auth_local(args) -> dict:
    import numpy as np

    from .authn import Account
    from .solver import random_horizontal_window, solve_alignment

    reg = synthetic_registration(args.seed)
    account = Account(reg.account_id)
    account.registration = reg
    rng = np.random.default_rng(args.seed)
    accepted = 0
    moves_per_trial = []
    for _ in range(args.trials):
        session = account.start_session(int(rng.integers(0, 2**63)), args.consequence)
        moves = solve_alignment(
            session.initial_grid, reg.secret, window=random_horizontal_window(rng)
        )
        for move in moves:
            account.record_move(session.session_id, move)
        outcome = account.submit(session.session_id)
        if outcome["status"] == "accepted":
            accepted += 1
        moves_per_trial.append(len(moves))
    return {
        "mode": "local",
        "trials": args.trials,
        "accepted": accepted,
        "mean_moves": float(np.mean(moves_per_trial)),
    }


def _auth_remote(args) -> dict:
    import httpx
    import numpy as np

    from .grid import Grid, Move
    from .solver import random_horizontal_window, solve_alignment

    if not args.account or not args.secret:
        raise ValidationError("remote auth-sim needs --account and --secret")
    secret = tuple(s.strip() for s in args.secret.split(","))
    rng = np.random.default_rng(args.seed)
    accepted = 0
    moves_per_trial = []
    with httpx.Client(base_url=args.url, timeout=30.0) as client:
        for _ in range(args.trials):
            response = client.post(
                f"/accounts/{args.account}/sessions",
                json={
                    "consequence": args.consequence,
                    "seed": int(rng.integers(0, 2**63)),
                },
            )
            if response.status_code != 200:
                raise IoError(f"session start failed: {response.text}")
            body = response.json()
            session_id = body["session_id"]
            grid = Grid(tuple(body["grid"]))
            moves = solve_alignment(grid, secret, window=random_horizontal_window(rng))
            for move in moves:
                response = client.post(
                    f"/sessions/{session_id}/moves",
                    json={"axis": move.axis, "index": move.index, "delta": move.delta},
                )
                if response.status_code != 200:
                    raise IoError(f"move rejected: {response.text}")
            response = client.post(f"/sessions/{session_id}/submit")
            if response.status_code != 200:
                raise IoError(f"submit failed: {response.text}")
            if response.json()["status"] == "accepted":
                accepted += 1
            moves_per_trial.append(len(moves))
    return {
        "mode": "remote",
        "trials": args.trials,
        "accepted": accepted,
        "mean_moves": float(np.mean(moves_per_trial)),
    }


def _cmd_auth_sim(args) -> int:
    payload = _auth_remote(args) if args.url else _auth_local(args)
    rows = [
        ("trials", payload["trials"]),
        ("accepted", payload["accepted"]),
        ("mean_moves", payload["mean_moves"]),
    ]
    lines = _kv_table(rows) + [f"{payload['accepted']}/{payload['trials']} accepted"]
    _emit(payload, args.output, lines)
    return 0


# ---------------------------------------------------------------------------
# attack-sim
# ---------------------------------------------------------------------------


def _median_by_position(rows: list[list[float]]) -> list[float]:
    length = min(len(r) for r in rows)
    return [float(statistics.median(r[i] for r in rows)) for i in range(length)]


def _attack_payload(args) -> dict:
    trials = []
    for t in range(args.trials):
        trial_seed = args.seed + t
        reg = synthetic_registration(trial_seed)
        report = simulate_attacker(reg, args.sessions, trial_seed)
        trials.append(report.to_dict())

    unique_values = [t["sessions_to_unique"] for t in trials]
    distribution: dict[str, int] = {}
    for value in unique_values:
        key = str(value)
        distribution[key] = distribution.get(key, 0) + 1
    as_numbers = [
        float("inf") if v == NOT_REACHED else float(v) for v in unique_values
    ]
    median = statistics.median(as_numbers)
    baseline = keyboard_baseline().to_dict()
    single_session_candidates = trials[0]["per_session_candidate_counts"][0]
    return {
        "seed": args.seed,
        "sessions": args.sessions,
        "trials": len(trials),
        "prior_tuple_count": SECRET_SPACE,
        "prior_bits": PRIOR_BITS,
        "reports": trials,
        "keyboard_baseline": baseline,
        "summary": {
            "per_session_candidate_counts_median": _median_by_position(
                [t["per_session_candidate_counts"] for t in trials]
            ),
            "intersection_sizes_median": _median_by_position(
                [t["intersection_sizes"] for t in trials]
            ),
            "residual_bits_median": _median_by_position(
                [t["residual_bits"] for t in trials]
            ),
            "sessions_to_unique_distribution": distribution,
            "sessions_to_unique_median": (
                NOT_REACHED if median == float("inf") else median
            ),
            "single_observation_leak_ratio": (
                single_session_candidates / baseline["per_session_candidate_counts"][0]
            ),
        },
    }


def _attack_table(payload: dict) -> list[str]:
    summary = payload["summary"]
    lines = _kv_table(
        [
            ("seed", payload["seed"]),
            ("trials", payload["trials"]),
            ("sessions", payload["sessions"]),
            ("prior_tuple_count", payload["prior_tuple_count"]),
            ("prior_bits", payload["prior_bits"]),
            ("single_observation_leak_ratio", summary["single_observation_leak_ratio"]),
            ("sessions_to_unique_median", summary["sessions_to_unique_median"]),
        ]
    )
    lines.append("")
    lines.append("session  candidates(med)  intersection(med)  residual_bits(med)")
    for i, (cand, inter, bits) in enumerate(
        zip(
            summary["per_session_candidate_counts_median"],
            summary["intersection_sizes_median"],
            summary["residual_bits_median"],
        ),
        start=1,
    ):
        lines.append(f"{i:>7}  {_fmt(cand):>15}  {_fmt(inter):>17}  {_fmt(bits):>18}")
    baseline = payload["keyboard_baseline"]
    lines.append("")
    lines.append(
        "keyboard baseline: candidates "
        f"{baseline['per_session_candidate_counts'][0]}, residual_bits "
        f"{_fmt(baseline['residual_bits'][0])}"
    )
    lines.append("sessions_to_unique distribution:")
    for key in sorted(summary["sessions_to_unique_distribution"]):
        lines.append(f"  {key}: {summary['sessions_to_unique_distribution'][key]}")
    return lines


def _cmd_attack_sim(args) -> int:
    payload = _attack_payload(args)
    _emit(payload, args.output, _attack_table(payload))
    return 0


# ---------------------------------------------------------------------------
# effort-report
# ---------------------------------------------------------------------------


def _cmd_effort_report(args) -> int:
    report = effort_report(
        args.flow,
        args.trials,
        args.seed,
        password_baseline_actions=args.password_baseline,
    )
    payload = {"flow": args.flow, **report.to_dict()}
    rows = [("flow", args.flow)] + list(report.to_dict().items())
    _emit(payload, args.output, _kv_table(rows))
    return 0


# ---------------------------------------------------------------------------
# serve
# ---------------------------------------------------------------------------


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import ServiceConfig, create_app

    listen = args.listen or os.environ.get("LISTEN_ADDR", "127.0.0.1:8080")
    host, _, port = listen.rpartition(":")
    if not host or not port.isdigit():
        raise ValidationError(f"LISTEN_ADDR must be host:port, got {listen!r}")
    config = ServiceConfig(
        data_dir=_data_dir(args),
        session_ttl_secs=float(
            args.ttl
            if args.ttl is not None
            else os.environ.get("SESSION_TTL_SECS", 300)
        ),
    )
    uvicorn.run(create_app(config), host=host, port=int(port), log_level="info")
    return 0


# ---------------------------------------------------------------------------
# parser assembly
# ---------------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="gridlock", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, trials_default=1):
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--trials", type=int, default=trials_default)
        p.add_argument("--output", choices=("table", "json"), default="table")
        p.add_argument("--data-dir", default=None)

    p = sub.add_parser("bootstrap", help="extract face crops into an index")
    common(p)
    p.add_argument("--mode", choices=("jack", "jill"), required=True)
    p.add_argument("--manifest", help="tag manifest (jill)")
    p.add_argument("--corpus", help="photo directory (jack)")
    p.add_argument("--friends", help="friends file (jack)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--output-dir", required=True)
    p.set_defaults(func=_cmd_bootstrap)

    p = sub.add_parser("register", help="create an account registration")
    common(p)
    p.add_argument("--account", default=None)
    p.add_argument("--index", help="face index.json from bootstrap")
    p.add_argument("--synthetic", action="store_true", help="use synthetic image ids")
    p.add_argument("--secret", help="four image ids, comma separated")
    p.set_defaults(func=_cmd_register)

    p = sub.add_parser("auth-sim", help="solver-driven authentications")
    common(p, trials_default=10)
    p.add_argument("--consequence", choices=("access", "payment"), default="access")
    p.add_argument("--url", help="drive a remote service instead of in-process")
    p.add_argument("--account", default=None, help="account id (remote)")
    p.add_argument("--secret", default=None, help="secret image ids (remote)")
    p.set_defaults(func=_cmd_auth_sim)

    p = sub.add_parser("attack-sim", help="shoulder-surfing observer simulation")
    common(p)
    p.add_argument("--sessions", type=int, default=3)
    p.set_defaults(func=_cmd_attack_sim)

    p = sub.add_parser("effort-report", help="user-action accounting")
    common(p, trials_default=100)
    p.add_argument("--flow", choices=("jack", "jill"), default="jill")
    p.add_argument(
        "--password-baseline",
        type=int,
        default=DEFAULT_PASSWORD_BASELINE_ACTIONS,
        help="actions to type a password (8 keystrokes + 1 submit)",
    )
    p.set_defaults(func=_cmd_effort_report)

    p = sub.add_parser("unlock", help="administrative lockout reset")
    common(p)
    p.add_argument("--account", required=True)
    p.set_defaults(func=_cmd_unlock)

    p = sub.add_parser("serve", help="run the HTTP service")
    common(p)
    p.add_argument("--listen", default=None, help="host:port (default LISTEN_ADDR)")
    p.add_argument("--ttl", type=float, default=None, help="session TTL seconds")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.trials < 1:
            raise ValidationError("--trials must be >= 1")
        if getattr(args, "workers", 1) < 1:
            raise ValidationError("--workers must be >= 1")
        return args.func(args)
    except CliUsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (IoError, IntegrityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GridlockError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
