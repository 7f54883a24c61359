"""Command-line front end: ``poleorder {hodge,charmod,universal,strata,verify-all}``.

Exit status: 0 when every check passes, 1 when any check fails, 2 on a usage
error (bad flags, unparsable polynomial, size cap exceeded).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

from . import __version__
from .polyring import InhomogeneousError, PolySyntaxError, ProblemSpec, parse_poly
from .report import ReportEnvelope, emit_report, human_report
from .suite import (
    charmod_checks,
    default_suite,
    family_suite,
    fiber_checks,
    hodge_checks,
    strata_checks,
    universal_checks,
    workload,
)

COMMANDS = ("hodge", "charmod", "universal", "strata", "verify-all")
SIZE_CAP = 120_000  # vectors in the largest single rank computation


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    n: int | None = None
    d: int | None = None
    k_max: int = 3
    poly: str | None = None
    poly_file: str | None = None
    trials: int = 5
    seed: int = 0
    out: str | None = None
    override_size_cap: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.n is not None and self.n < 1:
            raise UsageError("--n must be >= 1")
        if self.d is not None and self.d < 2:
            raise UsageError("--d must be >= 2")
        if self.k_max < 1:
            raise UsageError("--kmax must be >= 1")
        if self.trials < 1:
            raise UsageError("--trials must be >= 1")
        if self.poly is not None and self.poly_file is not None:
            raise UsageError("give --poly or --poly-file, not both")

    def echo(self) -> dict:
        out = asdict(self)
        out.pop("out")
        return out

    def polynomial(self):
        text = self.poly
        if self.poly_file is not None:
            try:
                text = Path(self.poly_file).read_text()
            except OSError as exc:
                raise UsageError(f"cannot read {self.poly_file}: {exc}") from exc
        if text is None:
            return None
        n_vars = self.n + 1 if self.n is not None else None
        try:
            f = parse_poly(text, n_vars)
        except (PolySyntaxError, InhomogeneousError) as exc:
            raise UsageError(f"bad polynomial: {exc}") from exc
        if self.d is not None and f.degree != self.d:
            raise UsageError(f"polynomial has degree {f.degree}, not {self.d}")
        return f

    def spec(self) -> ProblemSpec:
        f = self.polynomial()
        n = self.n if self.n is not None else (f.n_vars - 1 if f is not None else None)
        d = self.d if self.d is not None else (f.degree if f is not None else None)
        if n is None or d is None:
            raise UsageError(f"{self.command} needs --n and --d (or a polynomial)")
        return ProblemSpec(n, d)


def run_command(config: RunConfig) -> ReportEnvelope:
    env = ReportEnvelope(__version__, config.echo())
    cmd = config.command
    if cmd == "hodge":
        f = config.polynomial()
        if f is None:
            raise UsageError("hodge needs --poly or --poly-file")
        env.checks += hodge_checks(f)
    elif cmd == "charmod":
        env.checks += charmod_checks(config.spec(), config.k_max)
    elif cmd == "universal":
        env.checks += universal_checks(config.spec(), config.k_max, config.seed)
    elif cmd == "strata":
        spec = config.spec()
        env.checks += strata_checks(spec, config.trials, config.seed)
        f = config.polynomial()
        if f is not None:
            env.checks += fiber_checks(f, config.k_max, config.seed)
    elif cmd == "verify-all":
        if config.n is None and config.d is None:
            env.checks += default_suite(config.seed, config.trials)
        else:
            spec = config.spec()
            size = workload(spec, config.k_max)
            if size > SIZE_CAP and not config.override_size_cap:
                raise UsageError(
                    f"(n={spec.n}, d={spec.d}, kmax={config.k_max}) needs rank computations on {size} vectors; "
                    f"the cap is {SIZE_CAP} (use --override-size-cap)"
                )
            env.checks += family_suite(spec, config.k_max, config.seed, config.trials)
    return env


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="poleorder", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "hodge": "Hodge numbers of one smooth hypersurface, two ways",
        "charmod": "characteristic module of the universal family, two ways",
        "universal": "section spaces, goodness and intermediate cohomology",
        "strata": "singular strata codimensions and fiber surjectivity",
        "verify-all": "the full acceptance grid, or every check for one family",
    }
    for name in COMMANDS:
        p = sub.add_parser(name, help=helps[name])
        p.add_argument("--n", type=int)
        p.add_argument("--d", type=int)
        p.add_argument("--kmax", type=int, default=3, dest="k_max")
        p.add_argument("--poly")
        p.add_argument("--poly-file")
        p.add_argument("--trials", type=int, default=5)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", help="machine record path (human text goes to OUT.txt)")
        p.add_argument("--override-size-cap", action="store_true")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        config = RunConfig(**vars(args))
        env = run_command(config)
    except (UsageError, ValueError) as exc:
        print(f"poleorder: error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(human_report(env))
    if config.out:
        try:
            emit_report(env, config.out)
        except OSError as exc:
            print(f"poleorder: error: {exc}", file=sys.stderr)
            return 2
    return env.exit_status


if __name__ == "__main__":
    sys.exit(main())
