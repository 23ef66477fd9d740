"""Finite-truncation machinery for signed-permutation actions on l_p spaces."""
