"""
eisenlat - Command line
Every command prints JSON on stdout; logs go to stderr.

Exit codes: 0 success, 2 validation failure, 3 budget exhausted, 4 usage.
"""

import argparse
import json
import logging
import sys
import time
from pathlib import Path
from typing import Any, Callable

from eisenlat.core.config import settings
from eisenlat.core.exceptions import BudgetExceeded, EisenlatError, UsageError, ValidationError
from eisenlat.core.logging import setup_logging
from eisenlat.models.code import F4Code
from eisenlat.models.eisenstein import EisInt
from eisenlat.models.lattice import HermitianLattice
from eisenlat.models.schemas import dump_json
from eisenlat.services import autiso, catalog, construct, mass, modforms, neighbor, verify
from eisenlat.services.decompose import decompose, signature
from eisenlat.services.enumerate import minimum, mu2, theta_coeffs
from eisenlat.services.roots import classify_roots, identify_component, root_components
from eisenlat.services.standard import standard

logger = logging.getLogger("eisenlat")


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad usage; usage errors here exit with 4."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


# ==================== input helpers ====================


def read_input(path: str) -> Any:
    """JSON from a file, or from stdin when path is "-"."""
    if path == "-":
        text = sys.stdin.read()
        where = "stdin"
    else:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise UsageError(f"cannot read {path}: {e.strerror}") from e
        where = path
    if not text.strip():
        raise UsageError(f"{where} is empty")
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ValidationError(f"{where}: not valid JSON ({e.msg} at line {e.lineno})") from e


def read_lattice(path: str) -> HermitianLattice:
    return HermitianLattice.from_file(read_input(path))


def lattice_arg(value: str) -> HermitianLattice:
    """A lattice file, "-", or a standard lattice name such as U6."""
    if value == "-" or Path(value).exists():
        return read_lattice(value)
    return standard(value)


def code_arg(value: str) -> F4Code:
    if value == "-":
        return F4Code.from_file(read_input(value))
    return construct.load_code(value)


def parse_row_key(text: str) -> tuple[int, int]:
    """"14/1" -> (14, 1)."""
    rank, sep, no = text.strip().partition("/")
    if not sep or not rank.isdigit() or not no.isdigit():
        raise UsageError(f"bad row {text!r}, expected RANK/NO such as 14/1")
    return int(rank), int(no)


def _budget(args: argparse.Namespace) -> float:
    return args.budget if getattr(args, "budget", None) is not None else settings.aut_budget


# ==================== commands ====================


def cmd_construct(args: argparse.Namespace) -> dict[str, Any]:
    if args.name:
        L = standard(args.name)
    elif args.recipe:
        recipes = catalog.load_recipes()
        if args.recipe not in recipes:
            raise UsageError(f"unknown recipe {args.recipe!r}")
        L = construct.build_recipe(recipes[args.recipe])
    elif args.row:
        rank, no = parse_row_key(args.row)
        rows = catalog.load_catalog()
        L = construct.build_row(catalog.find_row(rows, rank, no), rows, catalog.load_recipes())
        if L is None:
            raise ValidationError(f"row {rank}/{no} has no construction")
    elif args.code:
        L = construct.from_code(code_arg(args.code))
    elif args.ext_square:
        L = construct.exterior_square(lattice_arg(args.ext_square))
    else:
        r, code = args.scaled_an
        try:
            radius = EisInt.parse(r)
        except ValueError as e:
            raise UsageError(f"bad Eisenstein integer {r!r}") from e
        L = construct.scaled_an_code(radius, code_arg(code))
    return L.to_file()


def cmd_invariants(args: argparse.Namespace) -> dict[str, Any]:
    L = read_lattice(args.lattice)
    out: dict[str, Any] = {
        "name": L.name,
        "rank": L.rank,
        "dim": L.dim,
        "discriminant": str(L.discriminant),
        "integral": L.is_integral(),
        "unimodular": L.is_unimodular(),
    }
    if out["integral"]:
        out.update(
            minimum=minimum(L),
            mu2=mu2(L),
            root_system=str(classify_roots(L)),
            decomposition=signature(decompose(L)),
            theta=theta_coeffs(L, args.theta_prec),
        )
    return out


def cmd_theta(args: argparse.Namespace) -> dict[str, Any]:
    L = read_lattice(args.lattice)
    coeffs = theta_coeffs(L, args.prec)
    out: dict[str, Any] = {"rank": L.rank, "theta": coeffs}
    if args.decompose:
        if L.rank != 14 or not L.is_unimodular():
            raise ValidationError("--decompose needs a rank-14 unimodular lattice")
        series = modforms.QSeries.of(coeffs)
        a, c = modforms.decompose_theta(series)
        out.update(a=a, c=c, series=str(series))
    return out


def parse_vector(text: str, option: str) -> list[EisInt]:
    """A JSON list of Eisenstein coordinates such as ["1", "1+w", 0]."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise UsageError(f"{option} is not a JSON list: {e.msg}") from e
    if not isinstance(raw, list):
        raise UsageError(f"{option} must be a JSON list of coordinates")
    try:
        return [EisInt.parse(str(c)) for c in raw]
    except ValueError as e:
        raise ValidationError(f"bad coordinate in {option}: {e}") from e


def cmd_aut(args: argparse.Namespace) -> dict[str, Any]:
    L = read_lattice(args.lattice)
    report = autiso.automorphism_group(L, budget=_budget(args))
    out = report.to_dict()
    gens = [g.matrix for g in report.generators]
    if args.orbit:
        x = parse_vector(args.orbit, "--orbit")
        if len(x) != L.rank:
            raise ValidationError(f"--orbit has {len(x)} coordinates, lattice has rank {L.rank}")
        out["orbit_size"] = len(autiso.orbit(x, gens))
    if args.exterior:
        out["exterior_generators"] = [
            [[str(z) for z in row] for row in construct.lift_exterior_automorphism(g)] for g in gens
        ]
    return out


def cmd_isom(args: argparse.Namespace) -> dict[str, Any]:
    L1, L2 = read_lattice(args.first), read_lattice(args.second)
    witness = autiso.is_isometric(L1, L2, budget=_budget(args))
    return {"isometric": witness is not None, "witness": witness.to_list() if witness else None}


def cmd_walk(args: argparse.Namespace) -> dict[str, Any]:
    L = lattice_arg(args.lattice)
    store = neighbor.neighbor_walk(L, args.steps, args.seed, budget=_budget(args))
    if args.match:
        neighbor.match_catalog(store, catalog.load_catalog())
    if args.chart:
        from eisenlat.services.charts import discovery_chart

        Path(args.chart).write_bytes(discovery_chart(store).getvalue())
        logger.info(f"📊 Chart written to {args.chart}")
    data = store.to_file()
    if args.out:
        Path(args.out).write_text(dump_json(data), encoding="utf-8")
        return {"classes": len(store), "steps": data["steps"], "out": args.out,
                "terminated_early": store.terminated_early}
    return data


def cmd_neighbor(args: argparse.Namespace) -> dict[str, Any]:
    L = read_lattice(args.lattice)
    x = parse_vector(args.vector, "--vector")
    return neighbor.neighbor2(L, x).to_file()


def cmd_mass(args: argparse.Namespace) -> dict[str, Any]:
    rows = catalog.load_catalog()
    ranks = [args.rank] if args.rank else [14, 15]
    return {
        "constants": mass.published_constants().to_dict(),
        "approx": mass.approx_check(),
        "partial": {str(n): mass.mass_report(rows, n) for n in ranks},
    }


def cmd_verify(args: argparse.Namespace) -> dict[str, Any]:
    rows = catalog.load_catalog(args.catalog) if args.catalog else catalog.load_catalog()
    recipes = catalog.load_recipes(args.recipes) if args.recipes else catalog.load_recipes()
    only = {parse_row_key(k) for k in args.only.split(",")} if args.only else None
    report = verify.cmd_verify_tables(rows, recipes, only=only, group_order=args.group_order,
                                      budget=_budget(args))
    counts = report.counts()
    logger.info(f"🏁 {counts['PASS']} passed, {counts['FAIL']} failed, {counts['SKIPPED']} skipped")
    args._exit_code = 0 if report.ok else ValidationError.exit_code
    return report.to_dict(timings=args.timings)


def cmd_lint(args: argparse.Namespace) -> dict[str, Any]:
    rows = catalog.load_catalog(args.catalog, expected=None) if args.catalog else catalog.load_catalog()
    findings = catalog.lint_catalog(rows)
    return {"rows": len(rows), "findings": [f.to_dict() for f in findings]}


def cmd_decompose(args: argparse.Namespace) -> list[dict[str, Any]]:
    return [p.to_file() for p in decompose(read_lattice(args.lattice))]


def cmd_roots(args: argparse.Namespace) -> dict[str, Any]:
    L = read_lattice(args.lattice)
    components = []
    for M, count in root_components(L):
        comp = identify_component(M, count)
        components.append({"type": str(comp), "rank": M.rank, "roots": count})
    components.sort(key=lambda c: (-c["rank"], c["type"]))
    return {"root_system": str(classify_roots(L)), "mu2": mu2(L), "components": components}


# ==================== parser ====================


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="eisenlat",
        description="Unimodular Hermitian lattices over the Eisenstein integers",
        epilog="Lattices are JSON files; '-' reads stdin. EISENLAT_DATA overrides the data directory.")

    # Global settings
    parser.add_argument('--verbose', '-v', action='store_true', help='debug logging')
    parser.add_argument('--quiet', '-q', action='store_true', help='warnings and errors only')
    parser.add_argument('--data', type=str, help='data directory (catalog, recipes, codes)')
    parser.add_argument('--threads', type=int, help='worker processes for enumeration and isometry search')
    parser.add_argument('--timings', action='store_true', help='add wall-clock timings to the output')

    sub = parser.add_subparsers(dest='command', required=True, parser_class=_Parser)

    def command(name: str, handler: Callable[[argparse.Namespace], Any], help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help, description=help)
        p.set_defaults(handler=handler)
        return p

    p = command('construct', cmd_construct, 'build a lattice and print its lattice file')
    how = p.add_mutually_exclusive_group(required=True)
    how.add_argument('--name', help='standard lattice, e.g. U6, E_8, D_5(sqrt-3), I14')
    how.add_argument('--recipe', help='recipe id from recipes.json, e.g. t1n1')
    how.add_argument('--row', help='catalog row RANK/NO, e.g. 14/19')
    how.add_argument('--code', help='lift of a self-dual F4 code (shipped name or file)')
    how.add_argument('--ext-square', dest='ext_square', help='exterior square of a lattice (file or name)')
    how.add_argument('--scaled-an', dest='scaled_an', nargs=2, metavar=('R', 'CODE'),
                     help='A_{n-1} construction scaled by 1/R from a code')

    p = command('invariants', cmd_invariants, 'discriminant, minimum, roots and decomposition')
    p.add_argument('lattice')
    p.add_argument('--theta-prec', dest='theta_prec', type=int, default=2, help='theta coefficients to enumerate')

    p = command('theta', cmd_theta, 'theta coefficients by enumeration')
    p.add_argument('lattice')
    p.add_argument('--prec', type=int, default=3)
    p.add_argument('--decompose', action='store_true', help='coordinates in the weight-14 basis (rank 14)')

    p = command('aut', cmd_aut, 'automorphism group generators and order')
    p.add_argument('lattice')
    p.add_argument('--budget', type=float, help=f'seconds (default {settings.aut_budget:g})')
    p.add_argument('--orbit', help='JSON coordinate vector; report the size of its orbit')
    p.add_argument('--exterior', action='store_true', help='also lift the generators to the exterior square')

    p = command('isom', cmd_isom, 'isometry test with witness')
    p.add_argument('first')
    p.add_argument('second')
    p.add_argument('--budget', type=float, help=f'seconds (default {settings.aut_budget:g})')

    p = command('walk', cmd_walk, 'seeded random walk along 2-neighbors')
    p.add_argument('lattice', help='start lattice (file, "-", or standard name)')
    p.add_argument('--steps', type=int, default=100)
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--budget', type=float, help='seconds per isometry test')
    p.add_argument('--out', help='write the class store here instead of stdout')
    p.add_argument('--chart', help='write a discovery chart (PNG) here')
    p.add_argument('--match', action='store_true', help='match classes against the catalog')

    p = command('neighbor', cmd_neighbor, 'single 2-neighbor step')
    p.add_argument('lattice')
    p.add_argument('--vector', required=True, help='JSON list of coordinates, e.g. \'["1", "1+w", 0]\'')

    p = command('mass', cmd_mass, 'mass constants and catalog partial sums')
    p.add_argument('--rank', type=int, choices=[14, 15])

    p = command('verify', cmd_verify, 'build and check every constructible catalog row')
    p.add_argument('--catalog', help='catalog file (default: shipped)')
    p.add_argument('--recipes', help='recipes file (default: shipped)')
    p.add_argument('--only', help='comma-separated rows, e.g. 14/1,14/19')
    p.add_argument('--group-order', dest='group_order', action='store_true', help='also check |G|')
    p.add_argument('--budget', type=float, help='seconds per automorphism group')

    p = command('lint', cmd_lint, 'catalog consistency findings')
    p.add_argument('catalog', nargs='?', help='catalog file (default: shipped)')

    p = command('decompose', cmd_decompose, 'orthogonal decomposition into indecomposables')
    p.add_argument('lattice')

    p = command('roots', cmd_roots, 'root system of a lattice')
    p.add_argument('lattice')

    return parser


def _error_payload(e: EisenlatError) -> dict[str, Any]:
    data: dict[str, Any] = {"error": str(e), "kind": e.kind}
    if isinstance(e, ValidationError) and e.offending:
        data["offending"] = [str(x) for x in e.offending]
    if isinstance(e, BudgetExceeded):
        data["elapsed"] = round(e.elapsed, 3)
        if isinstance(e.partial, dict):
            data["partial"] = e.partial
    return data


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(f"eisenlat: {e}", file=sys.stderr)
        sys.stdout.write(dump_json(_error_payload(e)))
        return e.exit_code

    setup_logging(verbose=args.verbose, quiet=args.quiet)
    if args.data:
        settings.data_dir = Path(args.data)
    if args.threads is not None:
        if args.threads < 1:
            sys.stdout.write(dump_json(_error_payload(UsageError("--threads must be >= 1"))))
            return UsageError.exit_code
        settings.threads = args.threads

    started = time.monotonic()
    try:
        result = args.handler(args)
    except EisenlatError as e:
        logger.error(f"❌ {e}")
        sys.stdout.write(dump_json(_error_payload(e)))
        return e.exit_code
    if args.timings and isinstance(result, dict):
        result["seconds"] = round(time.monotonic() - started, 3)
    sys.stdout.write(dump_json(result))
    return getattr(args, "_exit_code", 0)


if __name__ == '__main__':
    sys.exit(main())
