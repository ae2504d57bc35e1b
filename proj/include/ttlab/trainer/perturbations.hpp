#pragma once

#include "ttlab/core/rng.hpp"
#include "ttlab/core/types.hpp"

namespace ttlab::trainer {

/// N x d matrix of perturbation directions, one per row.
///
/// Without `orthogonal`, entries are i.i.d. standard normal. With it, rows
/// come in blocks of min(N, d): each block is an orthonormal set taken from
/// the QR factorization of a Gaussian matrix, and every row is then rescaled
/// to the norm of an independent standard normal d-vector, so each row is
/// still distributed as N(0, I).
MatX sample_perturbations(int d, int n, bool orthogonal, Rng& rng);

}  // namespace ttlab::trainer
