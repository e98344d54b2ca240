#pragma once

#include <symnoise/types.hpp>

// Dense complex matrix algebra over small Hilbert spaces: commutators,
// Hermitian exponentials, Hilbert-Schmidt geometry, adjoint (frame) actions.
// All functions are pure; matrices are passed by const reference and returned
// by value.

namespace symnoise {

double max_abs(const CMat& a);

bool is_hermitian(const CMat& a, double rel_tol = tol::hermitian);
bool is_unitary(const CMat& u, double abs_tol = tol::unitary);

void require_hermitian(const CMat& a, const char* who);
void require_unitary(const CMat& u, const char* who);
void require_same_dim(const CMat& a, const CMat& b, const char* who);

CMat commutator(const CMat& a, const CMat& b);

// Tr(a^dag b)
Complex hs_inner(const CMat& a, const CMat& b);
double hs_norm(const CMat& a);

// exp(-i h t) for Hermitian h, via eigendecomposition.
CMat expm_hermitian_generator(const CMat& h, double t);

// u x u^dag
CMat adjoint_action(const CMat& u, const CMat& x);

// (1/2) sum of singular values of (a - b); for Hermitian inputs this is the
// usual trace distance.
double trace_distance(const CMat& a, const CMat& b);
double trace_norm(const CMat& a);

CMat kron(const CMat& a, const CMat& b);

// Pauli matrices and friends, used all over the spin-model layer.
const CMat& pauli_x();
const CMat& pauli_y();
const CMat& pauli_z();
CMat pauli_on(int n_qubits, int site, const CMat& p);

}  // namespace symnoise
