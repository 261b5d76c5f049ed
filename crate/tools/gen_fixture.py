# One-off fixture generator: computes weight-one newforms with PARI and writes
# them in the .wt1 text format with exact cyclotomic coefficients.
import sys, cmath, math
from fractions import Fraction
from math import gcd
import cypari2
from sympy import cyclotomic_poly, Poly, symbols, primerange, factorint, totient
pari = cypari2.Pari()
pari.allocatemem(2*10**9)
pari.set_real_precision(60)
X = symbols('x')

def lcm(a, b): return a*b//gcd(a, b)

def primroot(q):
    p = list(factorint(q))[0]
    for g in range(2, q):
        if gcd(g, q) != 1: continue
        o = 1; x = g % q
        while x != 1:
            x = x*g % q; o += 1
        if o == totient(q): return g

def generators(N):
    gens = []
    for p, e in sorted(factorint(N).items()):
        q = p**e
        rest = N // q
        local = []
        if p == 2:
            if e == 2: local = [q-1]
            elif e >= 3: local = [q-1, 5]
        else:
            local = [primroot(q)]
        for l in local:
            # CRT: g = l mod q, 1 mod rest
            g = (l * rest * pow(rest, -1, q) + q * pow(q, -1, rest)) % N if rest > 1 else l
            gens.append(g)
    return gens

def frac_angle(z, maxden=2000):
    t = cmath.phase(z) / (2*math.pi)
    f = Fraction(t).limit_denominator(maxden) % 1
    assert abs(cmath.exp(2j*math.pi*float(f)) - z) < 1e-6, (z, f)
    return f

def run(N, conrey, M, out, source):
    pari(f'G=znstar({N},1); c=znconreylog(G,{conrey}); mf=mfinit([{N},1,[G,c]],0); B=mfeigenbasis(mf)')
    types = [int(pari(f'mfgaloistype(mf,B[{j+1}])')) for j in range(int(pari('#B')))]
    idx = [i for i,t in enumerate(types) if t < 0][0] + 1
    pari(f'F=B[{idx}]; V=mfembed(F, mfcoefs(F,{M})); E=mfembed(F)')
    vv = 'V[1]' if str(pari('type(V[1])')) == 't_VEC' else 'V'
    emb = [complex(pari(f'{vv}[{n+1}]')) for n in range(M+1)]
    o = int(pari('charorder(G,c)'))
    # t -> e(1/o) in embedding 1 (checked below)
    def chi_num(n):
        if gcd(n, N) != 1: return 0
        v = Fraction(str(pari(f'chareval(G,c,{n})')))
        return cmath.exp(2j*math.pi*float(v))
    # sanity: chi(p) = a_p^2 - a_{p^2}
    for p in primerange(2, int(M**0.5)+1):
        if N % p:
            assert abs(emb[p]**2 - emb[p*p] - chi_num(p)) < 1e-9, p
    # eigen angles
    eig = {}
    m = o if o % 2 == 0 else 2*o
    for p in primerange(2, M+1):
        a = emb[p]
        if N % p == 0:
            if abs(a) < 1e-9: eig[p] = None
            else:
                f = frac_angle(a); eig[p] = [f]; m = lcm(m, f.denominator)
        else:
            c = chi_num(p)
            disc = cmath.sqrt(a*a - 4*c)
            l1, l2 = (a+disc)/2, (a-disc)/2
            f1, f2 = frac_angle(l1), frac_angle(l2)
            eig[p] = [f1, f2]
            m = lcm(m, lcm(f1.denominator, f2.denominator))
    phi = cyclotomic_poly(m, X, polys=True)
    def zpow(f):
        k = int(f * m) % m
        return Poly(X**k, X).rem(phi)
    zero = Poly(0, X); one = Poly(1, X)
    chi_exact = {}
    def chi_ex(n):
        if gcd(n, N) != 1: return zero
        v = Fraction(str(pari(f'chareval(G,c,{n})')))
        return zpow(v)
    a = [None]*(M+1)
    a[1] = one
    fac = {}
    for n in range(2, M+1):
        fz = factorint(n)
        if len(fz) > 1:
            p, e = next(iter(fz.items())); q = p**e
            a[n] = (a[q]*a[n//q]).rem(phi)
        else:
            p, e = next(iter(fz.items()))
            ap = zero if eig[p] is None else (zpow(eig[p][0]) if N % p == 0 else (zpow(eig[p][0]) + zpow(eig[p][1])).rem(phi))
            if e == 1: a[n] = ap
            elif N % p == 0: a[n] = (ap * a[n//p]).rem(phi)
            else: a[n] = (ap*a[n//p] - chi_ex(p)*a[n//(p*p)]).rem(phi)
    # numeric cross-check of every coefficient
    zeta = cmath.exp(2j*math.pi/m)
    for n in range(1, M+1):
        val = sum(complex(int(cf))*zeta**k for (k,), cf in a[n].terms()) if not a[n].is_zero else 0
        assert abs(val - emb[n]) < 1e-8, (n, val, emb[n])
    gens = generators(N)
    lines = [f'level {N}', f'cycorder {m}', f'chi {N} {o}']
    for g in gens:
        v = Fraction(str(pari(f'chareval(G,c,{g})')))
        lines.append(f'gen {g} {int(v*o) % o}')
    lines.append(f'source {source}')
    lines.append(f'coeffs {M}')
    for n in range(1, M+1):
        lines.append(f'a {n} {fmt(a[n])}')
    open(out, 'w').write('\n'.join(lines) + '\n')
    print(out, 'm =', m, 'order', o, 'type', types[idx-1])

def fmt(p):
    if p.is_zero: return '0'
    parts = []
    for (k,), c in sorted(p.terms(), key=lambda t: -t[0][0]):
        c = int(c)
        if c == 0: continue
        s = '-' if c < 0 else '+'
        ac = abs(c)
        if k == 0: body = str(ac)
        else:
            zz = 'z' if k == 1 else f'z^{k}'
            body = zz if ac == 1 else f'{ac}*{zz}'
        parts.append((s, body))
    out = ('-' if parts[0][0] == '-' else '') + parts[0][1]
    for s, b in parts[1:]:
        out += f' {s} {b}'
    return out

if __name__ == '__main__':
    N, conrey, M, out = int(sys.argv[1]), int(sys.argv[2]), int(sys.argv[3]), sys.argv[4]
    run(N, conrey, M, out, sys.argv[5])
