"""Smoke test for the Python bindings. Run after `maturin develop`."""

import math

import shrinkset


def close(a, b, tol):
    assert abs(a - b) <= tol, (a, b)


square = shrinkset.RoundedSet([(0, 0), (1, 0), (1, 1), (0, 1)])
close(square.area, 1.0, 1e-15)
close(square.perimeter, 4.0, 1e-15)
close(square.dilate(0.5).area, 1 + 2 + math.pi / 4, 1e-12)

r_bar, center, _, half = square.inner_radius()
close(r_bar, 0.5, 1e-12)
assert center == (0.5, 0.5) and half == 0.0

sol = shrinkset.solve_tilde(square, 0.5)
assert sol.regime == "Ball"
close(sol.perimeter, 2 * math.sqrt(math.pi * 0.5), 1e-12)
sol = shrinkset.solve_tilde(square, 0.9)
assert sol.regime == "Opening"
rho = math.sqrt(0.1 / (4 - math.pi))
close(sol.perimeter, 4 - (8 - 2 * math.pi) * rho, 1e-12)
assert square.contains(sol.set)

try:
    shrinkset.solve_tilde(square, 2.0)
except ValueError as e:
    assert "exceeds" in str(e)
else:
    raise AssertionError("oversized area accepted")

trace = shrinkset.simulate(square, 4.0, 5.0, 1e-3)
assert trace.t_star is not None and trace.t_dagger < trace.t_star
assert trace.samples()[-1][1] == 0.0
assert trace.check_admissible()[0]
assert trace.to_csv().startswith("t,a,perimeter,regime,rho")

grow = shrinkset.simulate(square, 0.0, 1.0, 1e-2)
close(grow.area_at(1.0), 5 + math.pi, 1e-9)
close(grow.cost(1.0, 0.0, 1.0), 3 + math.pi / 3, 1e-8)

unit_ball = shrinkset.RoundedSet.ball((0, 0), 1.0)
report = shrinkset.find_m0(unit_ball, tol=1e-3, dt=1e-2)
close(report.m0, 2 * math.pi, 1e-2)
assert shrinkset.classify(unit_ball, 7.0)[0] == "extinct"
assert shrinkset.classify(unit_ball, 6.0)[0] == "grows"

again = shrinkset.RoundedSet.from_json(sol.set.to_json())
close(again.hausdorff(sol.set), 0.0, 1e-15)

print("python smoke test passed")
