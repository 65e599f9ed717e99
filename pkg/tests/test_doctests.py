import doctest

import sliceguard.cyclo
import sliceguard.knots
import sliceguard.expr


def test_doctests():
    for module in (sliceguard.cyclo, sliceguard.expr, sliceguard.knots):
        results = doctest.testmod(module)
        assert results.failed == 0, module.__name__
