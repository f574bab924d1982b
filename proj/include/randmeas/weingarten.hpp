// Copyright 2026 The randmeas Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <vector>

#include "randmeas/states.hpp"

namespace randmeas {

// Exact evaluation of Haar moments. The k-fold twirl of an operator O is the
// ensemble average of (U^dag)^{xk} O U^{xk}; it expands over permutation
// operators W_pi with coefficients from the Weingarten matrix C, the inverse
// of the Gram matrix Q_{pi,sigma} = d^{#cycles(pi sigma)}. Everything here is
// deterministic and serves as the oracle that validates the sampling-based
// estimators.

struct Permutation {
  std::vector<int> images;  // 0-based bijection of {0..k-1}

  int order() const { return static_cast<int>(images.size()); }
  static Permutation identity(int k);
  /// (this o other)(i) = this(other(i)).
  Permutation compose(const Permutation& other) const;
  Permutation inverse() const;
  int num_cycles() const;
  /// cycle_type()[l-1] = number of cycles of length l; sum l*b_l = k.
  std::vector<int> cycle_type() const;
  bool operator==(const Permutation& o) const { return images == o.images; }
};

/// All k! permutations in lexicographic order of their image arrays. This
/// order is the canonical row/column index of Q and C everywhere.
std::vector<Permutation> all_permutations(int k);

struct WeingartenTable {
  int k = 0;
  int d = 0;
  std::vector<Permutation> perms;
  Eigen::MatrixXd gram;        // Q_{pi,sigma} = d^{#cycles(pi sigma)}
  Eigen::MatrixXd weingarten;  // C = Q^{-1}
};

/// Builds the (k, d) table by numerically inverting Q. Requires k <= 5 and
/// k <= d (Q is singular otherwise; reported as an explicit error).
WeingartenTable weingarten_table(int k, int d);

/// Index map of the permutation operator W_pi on (C^d)^{xk}:
/// W_pi maps basis index I (digits s_1..s_k, copy 1 most significant) to the
/// index with digits t_c = s_{pi(c)}. Returned vector is image[I].
std::vector<std::int64_t> perm_operator_images(const Permutation& pi, int d);

/// Dense W_pi with W|s_1..s_k> = |s_{pi(1)}..s_{pi(k)}>; tr W = d^#cycles.
Matrix perm_operator(const Permutation& pi, int d);

/// Exact k-fold twirl over CUE(dim) of an operator on (C^dim)^{xk}.
Matrix twirl_global(const Matrix& op, int k, int dim);

/// Exact k-fold twirl over tensor products of independent local CUE(d)
/// unitaries on N sites. The operator lives on the copy-major space
/// (C^{d^N})^{xk}: copy 1 of all sites first, then copy 2, etc., so that
/// rho^{x2} and the swap operator are literal Kronecker products.
Matrix twirl_local(const Matrix& op, int k, int d, int num_sites);

/// Permutation operator for a site-wise tuple (pi_1..pi_N) in S_k^{xN} on
/// the copy-major space: copy index of each site i is permuted by pi_i.
std::vector<std::int64_t> local_perm_images(const std::vector<Permutation>& site_perms, int d);

/// Assembles tensor-product site operators into the copy-major matrix:
/// each entry of `site_ops` acts on one site's k copies (dimension d^k).
Matrix copy_major_kron(const std::vector<Matrix>& site_ops, int k, int d);

/// Number of permutations in S_k with the given cycle type b (b[l-1] cycles
/// of length l, sum l*b_l = k): k! / (prod b_l! * l^{b_l}).
std::int64_t cycle_type_count(const std::vector<int>& b);

/// All cycle types of S_k (partitions of k in the b-vector encoding).
std::vector<std::vector<int>> cycle_types(int k);

/// Max entrywise deviation between the Monte-Carlo k-fold twirl over n_u
/// CUE(dim) samples and the exact twirl, for a fixed seeded Hermitian test
/// operator. Expected O(1/sqrt(n_u)).
double mc_twirl_check(int k, int dim, int n_u, std::uint64_t seed);

}  // namespace randmeas
