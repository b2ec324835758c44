import math


def bracketed_newton(f, df, lo, hi, xtol=1e-10, ftol=0.0, maxiter=200):
    """Newton iteration kept inside a sign-change bracket ``[lo, hi]``.

    Falls back to bisection whenever the Newton step leaves the bracket.
    Returns ``(x, iterations)``.
    """
    f_lo = f(lo)
    if f_lo == 0:
        return lo, 0
    f_hi = f(hi)
    if f_hi == 0:
        return hi, 0
    if (f_lo > 0) == (f_hi > 0):
        raise ValueError("f(lo) and f(hi) must have opposite signs")
    sign_lo = f_lo > 0

    x = 0.5 * (lo + hi)
    for it in range(1, maxiter + 1):
        fx = f(x)
        if fx == 0 or abs(fx) < ftol:
            return x, it
        if (fx > 0) == sign_lo:
            lo = x
        else:
            hi = x
        d = df(x)
        x_new = x - fx / d if d != 0 else math.nan
        if not (min(lo, hi) < x_new < max(lo, hi)):
            x_new = 0.5 * (lo + hi)
        step = abs(x_new - x)
        x = x_new
        if step < xtol or abs(hi - lo) < xtol:
            return x, it
    return x, maxiter
