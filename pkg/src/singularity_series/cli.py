import argparse
import json
import logging
import sys

from pydantic import ValidationError

from .checks import CHECKS, get_check
from .config import RunConfig, resolve_cache_path, resolve_parallelism
from .dyckpath import all_dyck_paths, area, from_dyck, grid_svg, heights, to_dyck
from .exactpoly import LaurentPoly
from .gammamod import GammaModule, GermParams, cell_dim
from .htilde_cache import HtildeCache
from .linkseries import (
    Convention,
    KhrSeries,
    asymptotic_series,
    catalan_poly,
    cogen_series,
    convert,
    default_qmax,
    khr_nabla,
    pic_series,
    psi_hilb_series,
    psi_quot_series,
    to_xbar,
)
from .symfunc import use_cache
from .tables import TABLES, build_table, render_json, render_text

logger = logging.getLogger(__name__)

SERIES_KINDS = ["quot", "hilb", "pic", "cogen", "nabla", "catalan", "asymptotic", "dyck"]
CONVERSIONS = {"ors-reduced": Convention.ORS_REDUCED, "ors-unreduced": Convention.ORS_UNREDUCED}
CACHE_ACTIONS = ["status", "clear"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CHECK_FAILED = 2


def setup_logging(debug: bool = False):
    """Set up logging configuration; logs go to stderr."""
    level = logging.DEBUG if debug else logging.INFO
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[
            logging.StreamHandler(sys.stderr),
        ],
    )


def _say(config: RunConfig, text: str) -> None:
    if config.format == "text":
        print(text)


def _series_payload(series: KhrSeries) -> dict:
    return {
        "convention": series.convention.value,
        "n": series.n,
        "d": series.params.d if series.params is not None else None,
        "series": series.value.to_json(),
        "text": str(series.value.to_poly()),
    }


def _poly_payload(name: str, poly: LaurentPoly) -> dict:
    return {name: poly.to_json(), "text": str(poly)}


def _emit_series(config: RunConfig, series: KhrSeries) -> None:
    if config.format == "json":
        print(json.dumps(_series_payload(series), indent=2))
    else:
        print(f"{series.convention.value} {series.label}: {series.value}")


def _torus_xbar(config: RunConfig) -> KhrSeries:
    """Xbar series of T(n, d): fixed-point sums when coprime, the nabla formula when n divides d."""
    params = GermParams(n=config.n, d=config.d)
    if params.is_coprime:
        return to_xbar(psi_quot_series(params, config.qmax, resolve_parallelism(config.parallelism)))
    if config.d % config.n == 0:
        return khr_nabla(config.n, config.d // config.n, config.qmax)
    msg = f"no series available for T({config.n},{config.d}): need coprime n, d or n dividing d"
    raise ValueError(msg)


def run_series(config: RunConfig) -> int:
    params = GermParams(n=config.n, d=config.d)
    qmax = config.qmax
    kind = config.subcommand
    _say(config, f"🧮 Computing {kind} series for {params}")
    if kind == "quot":
        _emit_series(config, psi_quot_series(params, qmax, resolve_parallelism(config.parallelism)))
    elif kind == "hilb":
        _emit_series(config, psi_hilb_series(params, qmax, resolve_parallelism(config.parallelism)))
    elif kind == "pic":
        _emit_series(config, pic_series(params, qmax))
    elif kind == "cogen":
        _emit_series(config, cogen_series(params, qmax))
    elif kind == "nabla":
        _emit_series(config, khr_nabla(config.n, config.k, qmax))
    elif kind == "asymptotic":
        _emit_series(config, asymptotic_series(config.side, config.n, qmax if qmax is not None else default_qmax(params)))
    elif kind == "catalan":
        poly = catalan_poly(params)
        if config.format == "json":
            print(json.dumps(_poly_payload("catalan", poly), indent=2))
        else:
            print(f"C{params} = {poly}")
    elif kind == "dyck":
        run_dyck(config, params)
    else:
        msg = f"Unsupported series: {kind}. Available: {SERIES_KINDS}"
        raise ValueError(msg)
    return EXIT_OK


def run_dyck(config: RunConfig, params: GermParams) -> None:
    if config.genvec is None:
        rows = []
        for path in all_dyck_paths(params):
            delta = from_dyck(path, params)
            rows.append({"path": path.steps, "genvec": list(delta.genvec), "area": area(path), "dim": cell_dim(delta)})
        if config.format == "json":
            print(json.dumps(rows, indent=2))
        else:
            for row in rows:
                print(f"{row['path']}  genvec={row['genvec']}  area={row['area']}  dim={row['dim']}")
        return
    delta = GammaModule(tuple(config.genvec), params)
    path = to_dyck(delta)
    if config.svg is not None:
        config.svg.write_text(grid_svg(delta))
        _say(config, f"📄 Wrote grid to {config.svg}")
    if config.format == "json":
        print(json.dumps({"path": path.steps, "heights": heights(path), "area": area(path), "dim": cell_dim(delta)}))
    else:
        print(f"{delta}: path {path}, heights {heights(path)}, area {area(path)}, dim {cell_dim(delta)}")


def run_check(config: RunConfig) -> int:
    check = get_check(config.subcommand)
    _say(config, f"🧮 Running check {check.name}")
    reports = check.run(config)
    if config.format == "json":
        print(json.dumps([r.model_dump(mode="json") for r in reports], indent=2))
    else:
        for report in reports:
            where = f" {report.n},{report.d}" if report.n is not None else ""
            if report.passed:
                print(f"✅ {report.check}{where}: {report.status}")
            else:
                print(f"❌ {report.check}{where}: fail")
                if report.first_discrepancy:
                    print(f"   first discrepancy: {report.first_discrepancy}")
            if report.detail:
                print(f"   {report.detail}")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_CHECK_FAILED


def run_table(config: RunConfig) -> int:
    rows = build_table(config.subcommand, GermParams(n=config.n, d=config.d))
    print(render_json(rows) if config.format == "json" else render_text(rows))
    return EXIT_OK


def run_convert(config: RunConfig) -> int:
    if config.subcommand not in CONVERSIONS:
        msg = f"Unsupported conversion: {config.subcommand}. Available: {list(CONVERSIONS)}"
        raise ValueError(msg)
    xbar = _torus_xbar(config)
    _emit_series(config, convert(xbar, CONVERSIONS[config.subcommand]))
    return EXIT_OK


def run_cache(config: RunConfig, cache: HtildeCache) -> int:
    if config.subcommand == "status":
        status = cache.status()
        if config.format == "json":
            print(status.model_dump_json(indent=2))
        else:
            state = f"version {status.version}, {status.entries} entries, {status.size_bytes} bytes" if status.exists else "missing"
            print(f"📄 {status.path}: {state}")
    elif config.subcommand == "clear":
        cache.clear()
        _say(config, f"🗑️ Cleared {cache.path}")
    else:
        msg = f"Unsupported cache action: {config.subcommand}. Available: {CACHE_ACTIONS}"
        raise ValueError(msg)
    return EXIT_OK


def run(config: RunConfig) -> int:
    """Run one command; returns the exit status."""
    cache = HtildeCache(config.cache_path)
    if config.command == "cache":
        return run_cache(config, cache)
    use_cache(cache)
    before = len(cache)
    try:
        if config.command == "series":
            status = run_series(config)
        elif config.command == "check":
            status = run_check(config)
        elif config.command == "table":
            status = run_table(config)
        else:
            status = run_convert(config)
    finally:
        use_cache(None)
    if len(cache) != before:
        cache.save()
    return status


class CliParser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with EXIT_USAGE; subparsers inherit it."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"❌ Error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=2, help="Exponent of y (default: 2)")
    common.add_argument("--d", type=int, default=3, help="Exponent of x (default: 3)")
    common.add_argument("--k", type=int, default=1, help="Nabla power for (n, nk) links (default: 1)")
    common.add_argument("--qmax", type=int, help="Truncation order in q (default depends on the command)")
    common.add_argument("--format", choices=["text", "json"], default="text", help="Output format (default: text)")
    common.add_argument("--cache-path", help="Macdonald cache file (default: $SINGULARITY_SERIES_CACHE or ./.singularity_series_cache.json)")
    common.add_argument("--parallelism", type=int, default=0, help="Worker processes, 0 for one per core (default: 0)")
    common.add_argument("--side", choices=["hilb", "quot"], default="hilb", help="Side for asymptotic series and checks")
    common.add_argument("--genvec", help="Module as comma-separated n-generators, for `series dyck`")
    common.add_argument("--svg", help="Write the labelled grid SVG here, for `series dyck`")
    common.add_argument("--debug", action="store_true", help="Enable debug logging")

    parser = CliParser(
        prog="singularity-series",
        description="Generating series of the plane curve singularities y^n = x^d",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Quot series of the trefoil germ
  singularity-series series quot --n 2 --d 3 --qmax 10

  # Hikita table for (3,4)
  singularity-series table hikita --n 3 --d 4

  # Gen vs Cogen identity, JSON report
  singularity-series check gen-vs-cogen --n 3 --d 4 --format json

  # Reduced ORS series of the Hopf link
  singularity-series convert ors-reduced --n 2 --d 2

  # Draw the grid of one module
  singularity-series series dyck --n 3 --d 4 --genvec 0,4,5 --svg grid.svg
        """,
    )
    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("series", parents=[common], help="Compute a series").add_argument(
        "subcommand", choices=SERIES_KINDS
    )
    commands.add_parser("check", parents=[common], help="Run an identity check").add_argument(
        "subcommand", choices=list(CHECKS)
    )
    commands.add_parser("table", parents=[common], help="Print a table").add_argument(
        "subcommand", choices=list(TABLES)
    )
    commands.add_parser("convert", parents=[common], help="Convert to an ORS normalization").add_argument(
        "subcommand", choices=list(CONVERSIONS)
    )
    commands.add_parser("cache", parents=[common], help="Inspect or clear the Macdonald cache").add_argument(
        "subcommand", choices=CACHE_ACTIONS
    )
    return parser


def build_config(args: argparse.Namespace) -> RunConfig:
    genvec = None
    if args.genvec:
        try:
            genvec = [int(x) for x in args.genvec.split(",")]
        except ValueError as e:
            msg = f"--genvec must be comma-separated integers, got {args.genvec!r}"
            raise ValueError(msg) from e
    return RunConfig(
        command=args.command,
        subcommand=args.subcommand,
        n=args.n,
        d=args.d,
        k=args.k,
        qmax=args.qmax,
        format=args.format,
        cache_path=resolve_cache_path(args.cache_path),
        parallelism=args.parallelism,
        debug=args.debug,
        svg=args.svg,
        genvec=genvec,
        side=args.side,
    )


def main(argv: list[str] | None = None):
    """Main CLI entry point."""
    args = build_parser().parse_args(argv)
    setup_logging(args.debug)

    try:
        config = build_config(args)
        status = run(config)
    except KeyboardInterrupt:
        print("\n🛑 Stopped by user")
        sys.exit(EXIT_OK)
    except (ValidationError, ValueError) as e:
        print(f"❌ Error: {e}", file=sys.stderr)
        sys.exit(EXIT_USAGE)
    except Exception:
        logger.exception("Unexpected failure")
        raise
    sys.exit(status)


if __name__ == "__main__":
    main()
