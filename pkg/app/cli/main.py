"""
Command-line front end

    python -m app.cli.main triangulate data/samples/z2.pres
    python -m app.cli.main shell --complete 4
    python -m app.cli.main analyze data/samples/two_triangle.json
    python -m app.cli.main functions data/samples/z2_triangular.pres --n-max 4 --format csv
    python -m app.cli.main verify data/samples/z2_triangular.pres data/samples/two_triangle.json

Exit codes: 0 success, 1 failed check or refusal, 2 input error.
"""
import argparse
import json
import random
import sys
from typing import List, Optional

from pydantic import ValidationError

from core.config.config import config
from core.groups import tree_shelling
from core.groups.diagram import load_diagram, metrics
from core.groups.homotopy import fl_exact, fl_schedule_prop2, prop2_bound, trace_document
from core.groups.presentation import load_presentation, render_presentation, triangularize
from core.models.database import init_db, ledger_enabled
from core.models.reports import RunConfig
from core.utils.error_handler import FillingError, RefusalError, SizeGuardExceeded, error_handler
from core.utils.helpers import write_output
from core.utils.logging_config import get_logger, setup_logging
from core.utils.state_manager import StateManager

logger = get_logger(__name__)

EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2


def _emit(text: str, out: Optional[str]):
    path = write_output(text, out)
    if path is None:
        sys.stdout.write(text)
    else:
        logger.info(f"Wrote {path}")


def cmd_triangulate(run: RunConfig) -> int:
    presentation = load_presentation(run.inputs[0])
    result = triangularize(presentation)
    _emit(render_presentation(result, header=[run.header()]), run.out)
    return EXIT_OK


def _shell_forest(run: RunConfig) -> tree_shelling.Forest:
    if run.complete is not None:
        return tree_shelling.single(tree_shelling.complete_tree(run.complete))
    if run.random is not None:
        return tree_shelling.single(tree_shelling.random_tree(run.random, random.Random(run.seed)))
    if not run.inputs:
        raise FillingError("shell needs a tree file, --complete or --random", stage="shell")
    with open(run.inputs[0]) as f:
        return tree_shelling.parse_forest(f.read())


def cmd_shell(run: RunConfig) -> int:
    forest = _shell_forest(run)
    rows = []
    for index, tree in enumerate(forest.trees):
        single = tree_shelling.single(tree)
        greedy = tree_shelling.visibility_of_schedule(single, tree_shelling.greedy_shell(single))
        try:
            exact = tree_shelling.exact_visibility(single)
        except SizeGuardExceeded:
            exact = None
        rows.append({
            'tree': index,
            'nodes': len(tree),
            'greedy': greedy,
            'bound': tree_shelling.lemma1_bound(len(tree)),
            'corollary': tree_shelling.corollary1_bound(len(tree)),
            'exact': exact,
        })

    if run.output_format == 'json':
        text = json.dumps({'header': run.header(), 'trees': rows}, indent=2) + "\n"
    else:
        sep = ',' if run.output_format == 'csv' else ' '
        lines = [f"# {run.header()}", sep.join(['tree', 'nodes', 'greedy', 'bound', 'corollary', 'exact'])]
        for r in rows:
            exact = '-' if r['exact'] is None else str(r['exact'])
            lines.append(sep.join([str(r['tree']), str(r['nodes']), str(r['greedy']), str(r['bound']),
                                   f"{r['corollary']:.6f}", exact]))
        text = "\n".join(lines) + "\n"
    _emit(text, run.out)
    return EXIT_OK if all(r['greedy'] <= r['bound'] for r in rows) else EXIT_FAILED


def cmd_analyze(run: RunConfig) -> int:
    results = []
    passed = True
    for path in run.inputs:
        diagram = load_diagram(path)
        m = metrics(diagram)
        trace = fl_schedule_prop2(diagram)
        bound = prop2_bound(m.area, m.diameter, m.boundary_length)
        exact = None
        if m.area <= config.ORACLE_MAX_AREA:
            exact = fl_exact(diagram, run.node_budget)
        ok = trace.realized_fl <= bound and not trace.deviations and (exact is None or exact <= trace.realized_fl)
        passed = passed and ok
        results.append({
            'diagram': path,
            'metrics': m._asdict(),
            'fl_schedule': trace.realized_fl,
            'fl_exact': exact,
            'prop2_bound': bound,
            'passed': ok,
            'trace': trace_document(diagram, trace).model_dump(),
        })

    if run.output_format == 'json':
        text = json.dumps({'header': run.header(), 'diagrams': results}, indent=2) + "\n"
    else:
        sep = ',' if run.output_format == 'csv' else ' '
        columns = ['diagram', 'area', 'diameter', 'radius', 'max_valence', 'n', 'fl_schedule', 'fl_exact',
                   'prop2_bound', 'result']
        lines = [f"# {run.header()}", sep.join(columns)]
        for r in results:
            m = r['metrics']
            lines.append(sep.join([
                r['diagram'], str(m['area']), str(m['diameter']), str(m['radius']), str(m['max_valence']),
                str(m['boundary_length']), str(r['fl_schedule']), '-' if r['fl_exact'] is None else str(r['fl_exact']),
                f"{r['prop2_bound']:.6f}", 'pass' if r['passed'] else 'FAIL',
            ]))
            if run.output_format == 'text':
                lines.append(f"  profile {' '.join(str(x) for x in r['trace']['profile'])}")
        text = "\n".join(lines) + "\n"
    _emit(text, run.out)
    return EXIT_OK if passed else EXIT_FAILED


def cmd_workflow(run: RunConfig) -> int:
    from app.workflow.filling_workflow import run_workflow

    final_state = run_workflow(StateManager.create_initial_state(run))
    _emit(final_state['output'], run.out)
    return final_state['exit_code']


COMMANDS = {
    'triangulate': cmd_triangulate,
    'shell': cmd_shell,
    'analyze': cmd_analyze,
    'functions': cmd_workflow,
    'verify': cmd_workflow,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='filling',
        description='Filling length, shelling and van Kampen diagram toolkit'
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--n-max', type=int, default=config.N_MAX)
    common.add_argument('--max-area', type=int, default=config.MAX_AREA)
    common.add_argument('--node-budget', type=int, default=config.NODE_BUDGET)
    common.add_argument('--format', dest='output_format', choices=['csv', 'json', 'text'], default='text')
    common.add_argument('--seed', type=int, default=config.SEED)
    common.add_argument('--out', default=None, help='write output here instead of stdout')

    sub = parser.add_subparsers(dest='command', required=True)
    p = sub.add_parser('triangulate', parents=[common], help='rewrite a presentation with relators of length <= 3')
    p.add_argument('inputs', nargs=1, metavar='PRESENTATION')
    p = sub.add_parser('shell', parents=[common], help='greedy and exact visibility of binary trees')
    p.add_argument('inputs', nargs='?', metavar='TREES')
    group = p.add_mutually_exclusive_group()
    group.add_argument('--complete', type=int, metavar='DEPTH')
    group.add_argument('--random', type=int, metavar='NODES')
    p = sub.add_parser('analyze', parents=[common], help='metrics and scheduled filling of diagram files')
    p.add_argument('inputs', nargs='+', metavar='DIAGRAM')
    p = sub.add_parser('functions', parents=[common], help='tabulate f0, g0, h0')
    p.add_argument('inputs', nargs=1, metavar='PRESENTATION')
    p.add_argument('--reduced-only', action='store_true', help='tabulate freely reduced words only')
    p = sub.add_parser('verify', parents=[common], help='check every inequality on the table and fixtures')
    p.add_argument('inputs', nargs='+', metavar='PRESENTATION [DIAGRAM ...]')
    p.add_argument('--reduced-only', action='store_true', help='tabulate freely reduced words only')
    return parser


def _run_config(args: argparse.Namespace) -> RunConfig:
    inputs = args.inputs
    if inputs is None:
        inputs = []
    elif isinstance(inputs, str):
        inputs = [inputs]
    return RunConfig(
        command=args.command,
        inputs=[config.resolve_input(name) for name in inputs],
        n_max=args.n_max,
        max_area=args.max_area,
        node_budget=args.node_budget,
        output_format=args.output_format,
        seed=args.seed,
        out=args.out,
        complete=getattr(args, 'complete', None),
        random=getattr(args, 'random', None),
        reduced_only=getattr(args, 'reduced_only', False),
    )


def main(argv: Optional[List[str]] = None) -> int:
    setup_logging(config.LOG_LEVEL, config.LOG_FILE)
    args = build_parser().parse_args(argv)
    if ledger_enabled():
        init_db()
    try:
        run = _run_config(args)
    except ValidationError as e:
        logger.error(f"Invalid arguments: {e}")
        return EXIT_INPUT

    try:
        return COMMANDS[run.command](run)
    except RefusalError as e:
        error_handler.handle_error(e, stage=run.command)
        sys.stderr.write(f"refused: {e}\n")
        return EXIT_FAILED
    except (FillingError, OSError) as e:
        error_handler.handle_error(e, stage=run.command)
        sys.stderr.write(f"error: {e}\n")
        return EXIT_INPUT


if __name__ == '__main__':
    sys.exit(main())
