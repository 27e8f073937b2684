import math
import numbers

# Below this argument exp(-x) is a normal double and the plain incremental sum is exact enough.
_LINEAR_DOMAIN_LIMIT = 700.0


class GammaDomainException(Exception):
    def __init__(self, q, x):
        super().__init__(f'Regularized gamma requires an integer q >= 1 and x >= 0 (got q={q}, x={x})')


def _check_domain(q, x):
    if isinstance(q, bool) or not isinstance(q, numbers.Integral) or q < 1:
        raise GammaDomainException(q, x)
    if not isinstance(x, numbers.Real) or math.isnan(x) or x < 0:
        raise GammaDomainException(q, x)


def poisson_pmf(k: int, mean: float) -> float:
    """
    Probability that a Poisson count with the given mean equals k. Evaluated in the log domain.

    :param k:    Count (k >= 0).
    :type k:     int
    :param mean: Poisson mean (>= 0).
    :type mean:  float

    :return: Pr[N = k].
    :rtype:  float
    """
    if mean == 0:
        return 1.0 if k == 0 else 0.0
    return math.exp(-mean + k * math.log(mean) - math.lgamma(k + 1))


def regularized_upper_gamma(q: int, x: float) -> float:
    """
    Regularized upper incomplete gamma function R(q, x) = Gamma(q, x) / Gamma(q) for integer q. Uses the identity
    R(q, x) = exp(-x) * sum_{k<q} x^k / k!, i.e. the probability that a Poisson(x) count is below q. Terms are built
    from their predecessor (x / k), switching to a log-domain sum when exp(-x) would underflow.

    :param q: Shape, integer >= 1.
    :type q:  int
    :param x: Lower integration limit, >= 0.
    :type x:  float

    :raises GammaDomainException: Raised if q < 1, q is not an integer or x < 0.

    :return: R(q, x) in [0, 1].
    :rtype:  float
    """
    _check_domain(q, x)

    if x == 0:
        return 1.0
    if math.isinf(x):
        return 0.0

    if x < _LINEAR_DOMAIN_LIMIT:
        term = math.exp(-x)
        total = term

        for k in range(1, q):
            term *= x / k
            total += term
        return min(total, 1.0)

    # Log-domain accumulation around the largest term.
    log_x = math.log(x)
    log_terms = [-x]

    for k in range(1, q):
        log_terms.append(log_terms[-1] + log_x - math.log(k))
    peak = max(log_terms)
    total = sum(math.exp(log_term - peak) for log_term in log_terms)

    return min(math.exp(peak + math.log(total)), 1.0)
