"""
Baselines and flexibility
=========================

The same passengers under three policies: optimal waits, one constant
wait for everyone, and an offline matching that knows every arrival in
advance.  Then the flexibility is varied.
"""

from rideshare import ArrivalProcess, ODDistribution, build_grid, generate_stream
from rideshare import metrics

net = build_grid(10)
dist = ODDistribution.uniform(10)
stream = generate_stream(net, dist, ArrivalProcess(2.0, 5), 600, 0.6)

online = metrics.online_run(stream, net, dist, lam=2.0)
offline = metrics.offline_greedy(stream, net)
print(f"online  {online.cost_reduction:.3f}")
print(f"offline {offline.cost_reduction:.3f}")
for tau in (0.5, 1.0, 2.0, 4.0):
    print(f"constant {tau}: {metrics.constant_wait_run(tau, stream, net).cost_reduction:.3f}")

# more tolerance for detours means more sharing
for r in metrics.epsilon_sweep([0.0, 0.2, 0.4, 0.6, 0.8, 1.0], stream, net, dist, 2.0):
    print(f"epsilon {r.params['epsilon']:.1f}: {r.cost_reduction:.3f}")
