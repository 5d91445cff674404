"""
One forwarding game between two actors
======================================

Build the payoff matrix for a single sender/receiver pair and look at which
pure equilibrium gets played.
"""

# %%
from infogame import ActorState, GlobalParams, build_payoff_matrix, enumerate_pure_equilibria, solve_equilibrium
from infogame.model import EXPERT, TROLL, normalize

params = GlobalParams(phi=0.8, delta=0.1, lambda_=0.5, big_n=2000)

# a well-informed sender with a decent reputation, a novice receiver
sender = ActorState(1200.0, 800.0, 250.0, 150.0, 1500.0, 900.0)
receiver = ActorState(200.0, 120.0, 40.0, 40.0, 300.0, 400.0)
print("sender k =", round(normalize(sender, params).k, 3))
print("receiver k =", round(normalize(receiver, params).k, 3))

# %%
# Payoffs depend on personality: trolls chase popularity, experts guard reputation.
for name, persona in [("troll", TROLL), ("expert", EXPERT)]:
    m = build_payoff_matrix(sender, persona, receiver, persona, params)
    sender_pay, receiver_pay = m.bimatrix()
    print(f"\n{name}")
    print("  sender  ", [[round(x, 4) for x in row] for row in sender_pay])
    print("  receiver", [[round(x, 4) for x in row] for row in receiver_pay])
    print("  equilibria:", enumerate_pure_equilibria(m))
    prof = solve_equilibrium(m)
    print("  played:", prof.sender_action.value, prof.receiver_action.value)
