"""Conformable BVP - Command Line Interface."""

import logging
from pathlib import Path
from typing import Callable, List

import typer
from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape
from rich.table import Table

from conformable_bvp.catalog import EXAMPLE_TWO_THETA_WINDOW, example_problem, example_two_lambda1_closed_form
from conformable_bvp.errors import BVPError
from conformable_bvp.existence import ExistenceChecker, check_existence, compute_lambda1, compute_lambda2
from conformable_bvp.kernel import KernelParams, check_kernel_bounds, check_theta, eval_G, eval_H, eval_K
from conformable_bvp.models import NUMERICALLY_ESTIMATED, ExistenceReport, SolveResult, Verdict
from conformable_bvp.serialization import load_problem, write_report_json, write_solution_csv
from conformable_bvp.solver import SolverConfig, solve_nonlinear

# Initialize Rich console and Typer app
console = Console()
app = typer.Typer(
    name="conformable-bvp",
    help="Solve conformable fractional boundary value problems and check positive-solution criteria",
    rich_markup_mode="rich",
)
kernel_app = typer.Typer(help="Inspect the Green's kernels G, H and K")
app.add_typer(kernel_app, name="kernel")

EXIT_INPUT_ERROR = 2
EXIT_NOT_CONVERGED = 3


@app.callback()
def main(verbose: bool = typer.Option(False, "--verbose", "-v", help="Show debug logging")):
    """Conformable BVP toolkit."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


def fail(exc: Exception) -> typer.Exit:
    """Print an input/validation error and build the matching exit."""
    console.print(f"[red]Error:[/red] {escape(str(exc))}", highlight=False)
    return typer.Exit(EXIT_INPUT_ERROR)


def fmt(value: float) -> str:
    """Format a number with 12 significant digits, as in the CSV output."""
    return f"{value:.12g}"


@kernel_app.command(name="eval")
def kernel_eval(
    alpha: float = typer.Option(..., "--alpha", help="Order alpha in (1, 2]"),
    lambda_: float = typer.Option(..., "--lambda", help="Boundary coefficient lambda >= 0"),
    eta: float = typer.Option(..., "--eta", help="Integral endpoint eta in (0, 1]"),
    t: float = typer.Option(0.5, "--t", help="Point t in [0, 1]"),
    s: float = typer.Option(0.5, "--s", help="Point s in [0, 1]"),
):
    """Print G(t,s), H(eta,s) and K(t,s)."""
    try:
        params = KernelParams(alpha=alpha, lambda_=lambda_, eta=eta)
        g = eval_G(alpha, t, s)
        h = eval_H(alpha, eta, s)
        k = eval_K(params, t, s)
    except BVPError as exc:
        raise fail(exc)
    console.print(f"G = {fmt(g)}")
    console.print(f"H(eta,s) = {fmt(h)}")
    console.print(f"K = {fmt(k)}")


@kernel_app.command(name="verify")
def kernel_verify(
    alpha: float = typer.Option(..., "--alpha", help="Order alpha in (1, 2]"),
    lambda_: float = typer.Option(..., "--lambda", help="Boundary coefficient lambda >= 0"),
    eta: float = typer.Option(..., "--eta", help="Integral endpoint eta in (0, 1]"),
    theta: float = typer.Option(0.25, "--theta", help="Cone parameter in (0, 1/2)"),
    samples: int = typer.Option(10000, "--samples", min=1, help="Number of sampled (t, s) pairs"),
    seed: int = typer.Option(0, "--seed", help="Random seed"),
):
    """Sample the kernel bounds and report violations."""
    try:
        check_theta(theta)
        params = KernelParams(alpha=alpha, lambda_=lambda_, eta=eta)
        report = check_kernel_bounds(params, theta, samples, seed)
    except BVPError as exc:
        raise fail(exc)

    table = Table(title=f"Kernel bounds ({samples} samples, seed {seed})")
    table.add_column("Check", style="cyan")
    table.add_column("Violations", justify="right")
    table.add_column("Worst margin", justify="right")
    for name, count in report.violations.items():
        style = "green" if count == 0 else "red"
        table.add_row(name, f"[{style}]{count}[/{style}]", fmt(report.worst_margin[name]))
    console.print(table)
    console.print(f"violations: {report.total_violations}")


def print_solve_summary(result: SolveResult) -> None:
    residuals = result.residuals
    table = Table(title="Solve summary")
    table.add_column("Quantity", style="cyan")
    table.add_column("Value", justify="right")
    table.add_row("status", result.status.value)
    table.add_row("iterations", str(result.iterations))
    table.add_row("update norm", fmt(result.update_norm))
    table.add_row("ODE residual (sup on [0.05, 0.95])", fmt(residuals.ode_residual_sup))
    table.add_row("|x(0)|", fmt(residuals.bc0_residual))
    table.add_row("|x(1) - lambda int_0^eta x|", fmt(residuals.bc1_residual))
    table.add_row("min x", fmt(residuals.min_value))
    table.add_row("sup norm", fmt(residuals.sup_norm))
    table.add_row(f"cone ratio on [{residuals.theta:g}, {1 - residuals.theta:g}]", fmt(residuals.cone_ratio))
    table.add_row("theta^2", fmt(residuals.theta**2))
    table.add_row("in cone", "yes" if residuals.in_cone else "no")
    console.print(table)


@app.command(name="solve")
def solve(
    problem_file: Path = typer.Argument(..., help="Problem file (JSON)"),
    grid_n: int = typer.Option(SolverConfig.grid_n, "--grid-n", help="Number of grid intervals"),
    tol: float = typer.Option(SolverConfig.tol, "--tol", help="Stop when the sup-norm update falls below this"),
    max_iter: int = typer.Option(SolverConfig.max_iter, "--max-iter", help="Iteration cap"),
    damping: float = typer.Option(SolverConfig.damping, "--damping", help="Damping factor in (0, 1]"),
    out: Path = typer.Option(Path("solution.csv"), "--out", help="Solution CSV path"),
    theta: float = typer.Option(SolverConfig.theta, "--theta", help="Cone parameter for the cone check"),
):
    """Solve the problem by damped fixed-point iteration and write the solution grid."""
    try:
        problem = load_problem(problem_file)
        result = solve_nonlinear(
            problem, grid_n=grid_n, tol=tol, max_iter=max_iter, damping=damping, theta=theta
        )
    except BVPError as exc:
        raise fail(exc)

    try:
        write_solution_csv(out, result)
    except BVPError as exc:
        raise fail(exc)
    print_solve_summary(result)
    if not result.converged:
        console.print(f"[yellow]Not converged ({result.status.value}); last iterate written to {out}[/yellow]")
        raise typer.Exit(EXIT_NOT_CONVERGED)
    console.print(f"[green]Converged; solution written to {out}[/green]")


def print_verdicts(report: ExistenceReport) -> None:
    console.print(f"Lambda2 = {fmt(report.lambda2)}")
    for label, verdict in (
        ("Theorem 3.1", report.thm31),
        ("Theorem 3.2", report.thm32),
        ("Corollary 3.1", report.cor31),
    ):
        line = f"{label}: {verdict.verdict.value}"
        if verdict.witnesses:
            line += f" (theta in [{verdict.witnesses[0]:g}, {verdict.witnesses[-1]:g}], {len(verdict.witnesses)} points)"
        console.print(line)
    if NUMERICALLY_ESTIMATED in report.growth.sources.values():
        console.print(
            "[yellow]Note: some growth numbers are numerically estimated; sampling cannot certify a limit.[/yellow]"
        )


@app.command(name="check")
def check(
    problem_file: Path = typer.Argument(..., help="Problem file (JSON)"),
    theta_min: float = typer.Option(ExistenceChecker.THETA_MIN, "--theta-min", help="Smallest theta"),
    theta_max: float = typer.Option(ExistenceChecker.THETA_MAX, "--theta-max", help="Largest theta"),
    theta_steps: int = typer.Option(ExistenceChecker.THETA_STEPS, "--theta-steps", help="Number of theta grid points"),
    out: Path = typer.Option(Path("report.json"), "--out", help="Existence report JSON path"),
):
    """Check the positive-solution existence criteria and write a JSON report."""
    try:
        problem = load_problem(problem_file)
        report = check_existence(problem, theta_min, theta_max, theta_steps)
    except BVPError as exc:
        raise fail(exc)

    try:
        write_report_json(out, report)
    except BVPError as exc:
        raise fail(exc)
    print_verdicts(report)


def run_assertions(assertions: List[tuple]) -> bool:
    """Print PASS/FAIL per (label, predicate) pair; return True if all passed."""
    passed = True
    for label, predicate in assertions:
        ok = bool(predicate())
        passed = passed and ok
        status = "[green]PASS[/green]" if ok else "[red]FAIL[/red]"
        console.print(f"{status}: {label}", highlight=False)
    return passed


def example_one_assertions() -> List[tuple]:
    problem = example_problem(1)
    report = check_existence(problem)
    result = solve_nonlinear(problem)
    residuals = result.residuals
    interior = result.solution.values[1:-1]
    return [
        ("Corollary 3.1 hypotheses hold", lambda: report.cor31.verdict is Verdict.SATISFIED),
        ("solver converged", lambda: result.converged),
        ("x > 0 on interior nodes", lambda: bool((interior > 0).all())),
        (f"|x(1) - 2 int_0^(1/3) x| = {residuals.bc1_residual:.3g} <= 1e-6", lambda: residuals.bc1_residual <= 1e-6),
        (f"ODE residual {residuals.ode_residual_sup:.3g} <= 1e-3", lambda: residuals.ode_residual_sup <= 1e-3),
        (
            f"min over [0.25, 0.75] >= 0.0625 ||x|| (ratio {residuals.cone_ratio:.6g})",
            lambda: residuals.cone_ratio >= 0.0625,
        ),
    ]


def example_two_assertions() -> List[tuple]:
    problem = example_problem(2)
    params = problem.params
    lambda2 = compute_lambda2(params)
    low, high = EXAMPLE_TWO_THETA_WINDOW
    report = check_existence(problem, low, high, 51)
    quadrature = compute_lambda1(params, 0.4)
    closed = example_two_lambda1_closed_form(0.4)
    return [
        (f"Λ₂ = {fmt(lambda2)}", lambda: abs(lambda2 - 1.875) <= 1e-10 * 1.875),
        (
            f"Λ₁(θ) < 400 at 51 grid points in [{low:g},{high:g}]",
            lambda: all(value < 400.0 for _, value in report.lambda1_curve),
        ),
        (f"Λ₁(0.4) = {fmt(quadrature)} matches closed form", lambda: abs(quadrature - closed) <= 1e-6 * closed),
        ("Theorem 3.1 hypotheses hold", lambda: report.thm31.verdict is Verdict.SATISFIED),
    ]


EXAMPLE_RUNS: dict[int, Callable[[], List[tuple]]] = {1: example_one_assertions, 2: example_two_assertions}


@app.command(name="examples")
def examples(which: int = typer.Argument(..., help="Worked example to reproduce (1 or 2)")):
    """Reproduce one of the worked examples and check its stated quantities."""
    if which not in EXAMPLE_RUNS:
        console.print(f"[red]Error:[/red] unknown example {which} (expected 1 or 2)")
        raise typer.Exit(EXIT_INPUT_ERROR)
    try:
        assertions = EXAMPLE_RUNS[which]()
    except BVPError as exc:
        raise fail(exc)
    if not run_assertions(assertions):
        raise typer.Exit(1)


if __name__ == "__main__":
    app()
