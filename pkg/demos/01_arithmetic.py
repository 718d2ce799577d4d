"""
Primes, Mobius, totients and Farey shells
=========================================

The arithmetic layer: sieves up to a limit, the dyadic shells of reduced
fractions a/q with 2^s <= q < 2^(s+1), and their separation.
"""
import numpy as np

from carleson_primes import arith

primes = arith.sieve_primes(100)
print("primes below 100:", primes)

mu, phi = arith.arith_tables(30)
print("n      :", np.arange(1, 31))
print("mu(n)  :", mu[1:])
print("phi(n) :", phi[1:])

# shell sizes grow like 4^s; every shell is exactly separated at its own scale
for s in range(7):
    shell = arith.farey_shell(s)
    print(f"s={s}: {len(shell):5d} fractions, separated: {arith.check_separation(list(shell), s)}")

print("shell 2:", [str(f) for f in arith.farey_shell(2)])

# phi(q) >= c_eps q^(1 - eps), the constant measured on [1, 1e5]
c, worst = arith.totient_growth_constant(0.1)
print(f"phi(q) >= {c:.3f} q^0.9 for q <= 1e5, attained at q = {worst}")
