"""
How long should a passenger wait?
=================================

psi is the expected cost of leaving alone and gamma the expected shared
cost.  Waiting longer makes a partner more likely to show up but eats into
the detour budget, so fewer partners stay compatible.
"""

from rideshare import ODDistribution, build_grid, make_passenger, optimal_wait

net = build_grid(10)
dist = ODDistribution.uniform(10)
p = make_passenger(net, 0, (0, 0), (9, 9), epsilon=0.6)

curve = optimal_wait(p, dist, lam=2.0, net=net)
for u, ps, gm in list(zip(curve.u_grid, curve.psi, curve.gamma))[::5]:
    print(f"u={u:5.2f}  psi={ps:6.3f}  gamma={gm:6.3f}  total={ps + gm:6.3f}")
print("tau =", curve.tau, "of at most", p.max_wait)

# a short trip has little slack and barely waits
short = make_passenger(net, 1, (4, 4), (4, 6), epsilon=0.6)
print("short trip tau =", optimal_wait(short, dist, 2.0, net).tau)
