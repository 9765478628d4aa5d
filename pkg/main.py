import logging
import sys
from pathlib import Path

import click

from certificate import check_certificate, dumps, loads, render_certificate, render_verdict
from complexity.config import KNOWN_STRATEGIES, AnalysisConfig, OracleConfig, SearchConfig
from complexity.dependency_pairs import (dp_problem, standard_dependency_pairs, weak_dependency_pairs,
                                         weak_innermost_dependency_pairs)
from complexity.graph import congruence_graph, estimate_graph, format_class, maximal_source_paths, to_dot
from complexity.pipeline import resolve_mode
from complexity.run import run, run_oracle, setup
from trs import innermost_usable_map, listing_print, load_trs, usable_map
from trs.parsing import Trs

DUMPS = ("iota", "phi", "wdp", "widp", "dp", "usable", "graph")
FORMATS = ("plain", "certificate", "dot", "json-certificate")


def print_dump(trs: Trs, mode: str, what: str) -> None:
    if what == "iota":
        listing_print("iota", innermost_usable_map(trs).format())
    elif what == "phi":
        listing_print("phi", usable_map(trs).format())
    elif what == "wdp":
        listing_print("WDP", weak_dependency_pairs(trs).format())
    elif what == "widp":
        listing_print("WIDP", weak_innermost_dependency_pairs(trs).format())
    elif what == "dp":
        listing_print("DP", standard_dependency_pairs(trs).format())
    elif what == "usable":
        problem = dp_problem(trs, mode)
        listing_print(f"U({problem.flavor})", [f"{k}: {trs.rule(k)}" for k in problem.usable_rules()])
    elif what == "graph":
        graph = estimate_graph(dp_problem(trs, mode))
        cg = congruence_graph(graph)
        lines = [f"{a} -> {b}" for a, b in sorted(graph.edges)]
        lines += ["classes: " + " ".join(format_class(c) for c in cg.classes),
                  "sources: " + " ".join(format_class(c) for c in cg.source_classes)]
        lines += ["path: " + " -> ".join(format_class(c) for c in p) for p in maximal_source_paths(cg)]
        listing_print("weak dependency graph", lines)


def check_file(trs: Trs, certificate_path: str) -> int:
    cert = loads(Path(certificate_path).read_text(encoding="utf-8"), trs)
    result = check_certificate(trs, cert)
    if result:
        click.echo(cert.verdict)
        click.echo("certificate OK")
        return 0
    click.echo(render_verdict(None))
    click.echo(f"certificate rejected: {result.reason}")
    return 1


@click.command(context_settings=dict(max_content_width=120))
@click.argument("input-file", type=click.Path(exists=True, dir_okay=False, allow_dash=True))
@click.option("--mode", type=click.Choice(["full", "innermost"]), default=None,
              help="Rewrite strategy; defaults to the file's STRATEGY section, else full")
@click.option("--strategies", default=",".join(KNOWN_STRATEGIES), show_default=True,
              help="Comma-separated strategies, tried in order")
@click.option("--dim", type=int, default=2, show_default=True, help="Largest matrix dimension")
@click.option("--coeff-bound", type=int, default=3, show_default=True, help="Largest matrix entry and constant")
@click.option("--degree-cap", type=int, default=None, help="Reject interpretations of larger degree")
@click.option("--search-budget", type=int, default=200_000, show_default=True,
              help="Search nodes per interpretation problem and dimension")
@click.option("--timeout", type=click.FloatRange(min=0, min_open=True), default=60.0, show_default=True,
              help="Seconds for the whole analysis")
@click.option("--format", "output_format", type=click.Choice(FORMATS), default="plain", show_default=True)
@click.option("--dump", type=click.Choice(DUMPS), multiple=True, help="Structural listings printed after the verdict")
@click.option("--oracle", "oracle_n", type=click.IntRange(min=1), default=None,
              help="Append rc(n) for n up to this size and compare with the certified bound")
@click.option("--fuel", type=click.IntRange(min=1), default=100_000, show_default=True,
              help="Rewrite steps per oracle start term")
@click.option("--check", "certificate_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Validate a JSON certificate against the input system instead of analyzing")
@click.option("--verbose", is_flag=True, help="Log search details")
@click.option("--quiet", is_flag=True, help="Log warnings only")
def main(input_file, mode, strategies, dim, coeff_bound, degree_cap, search_budget, timeout, output_format,
         dump, oracle_n, fuel, certificate_path, verbose, quiet):
    """Prove polynomial upper bounds on the runtime complexity of a term rewrite system."""
    setup(level="DEBUG" if verbose else "WARNING" if quiet else "INFO")
    try:
        trs = load_trs(input_file)
        if certificate_path is not None:
            sys.exit(check_file(trs, certificate_path))
        search = SearchConfig(max_dim=dim, coeff_bound=coeff_bound, degree_cap=degree_cap, max_nodes=search_budget)
        config = AnalysisConfig(mode=mode, strategies=tuple(s.strip() for s in strategies.split(",") if s.strip()),
                                search=search, timeout=timeout)
    except (ValueError, OSError) as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(2)

    result = run(trs, config)
    click.echo(result.verdict)
    for note in result.notes:
        logging.warning(f"note: {note}")

    cert = result.certificate
    if output_format == "certificate" and cert is not None:
        click.echo(render_certificate(cert, trs), nl=False)
    elif output_format == "json-certificate" and cert is not None:
        click.echo(dumps(cert))
    elif output_format == "dot":
        click.echo(to_dot(estimate_graph(dp_problem(trs, result.mode))), nl=False)

    for what in dump:
        print_dump(trs, resolve_mode(trs, mode), what)

    if oracle_n is not None:
        oracle = OracleConfig(n_max=oracle_n, fuel=fuel)
        samples, bound = run_oracle(trs, result.mode, None if cert is None else cert.degree, oracle)
        for s in samples:
            click.echo(f"{s.n} {f'diverged({fuel})' if s.diverged else s.value}")
        if bound is not None:
            click.echo(f"PASS (C={bound.constant})" if bound.passed
                       else f"FAIL at n={','.join(map(str, bound.failures))}")

    sys.exit(0 if cert is not None else 1)


if __name__ == '__main__':
    main()
