"""A few small linear programs through the interior-point solver."""
import numpy as np

from dantzig.lp import LinearProgram, feasibility_check, solve_lp

# minimize -x - 2y over the triangle x, y >= 0, x + y <= 1
lp = LinearProgram(c=[-1.0, -2.0], G=[[1.0, 1.0]], h=[1.0], lower=[0.0, 0.0])
sol = solve_lp(lp)
print(sol.status.value, sol.x.round(8), "objective", round(sol.objective_value, 8))
print("iterations:", sol.iterations, " duality gap:", sol.duality_gap)

# the dual multiplier on x + y <= 1 is the marginal value of the budget
print("dual of the budget row:", sol.dual_ineq)
print(feasibility_check(lp, sol.x))

# an infeasible program comes back with a certificate instead of a point
bad = LinearProgram(c=[1.0], G=[[1.0]], h=[0.0], lower=[1.0])
sol = solve_lp(bad)
print(sol.status.value, sol.diagnostics["certificate"])

# an unbounded one returns a ray along which the objective decreases forever
ray = solve_lp(LinearProgram(c=[-1.0, 0.0], G=[[0.0, 1.0]], h=[1.0], lower=[0.0, 0.0]))
print(ray.status.value, ray.diagnostics["certificate"]["x"])

# per iteration: primal residual, dual residual, complementarity
lp = LinearProgram(c=np.ones(4), A=[[1, 2, 3, 4]], b=[10.0], lower=np.zeros(4))
for k, (pr, dr, gap) in enumerate(solve_lp(lp).diagnostics["history"]):
    print(f"{k:2d}  {pr:9.2e}  {dr:9.2e}  {gap:9.2e}")
