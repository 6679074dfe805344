#ifndef CSSEL_CSSEL_HPP
#define CSSEL_CSSEL_HPP

#include "bounds.hpp"
#include "column_select.hpp"
#include "error.hpp"
#include "kernels.hpp"
#include "matrix.hpp"
#include "rrqr.hpp"
#include "scalar.hpp"
#include "skeleton.hpp"
#include "submatrix_select.hpp"
#include "surrogate.hpp"
#include "svd.hpp"
#include "test_matrices.hpp"

#endif
