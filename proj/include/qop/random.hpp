#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "qop/channel.hpp"
#include "qop/linalg.hpp"
#include "qop/states.hpp"
#include "qop/transform.hpp"

// Seeded generators for the randomized property suites. Every generator
// takes the engine explicitly so runs are reproducible.
namespace qop::rng {

using Engine = std::mt19937_64;

linalg::Complex gaussian(Engine& eng);

std::vector<linalg::Complex> unit_vector(Engine& eng, std::size_t dim);

states::PureStateSet state_set(Engine& eng, std::size_t dim, std::size_t n);

// Resamples until the Gram spectrum is comfortably away from singular.
states::PureStateSet independent_state_set(Engine& eng, std::size_t dim,
                                           std::size_t n);

linalg::ComplexMatrix matrix(Engine& eng, std::size_t rows, std::size_t cols);

linalg::HermitianMatrix hermitian(Engine& eng, std::size_t dim);

linalg::HermitianMatrix psd(Engine& eng, std::size_t dim);

// PSD with unit diagonal.
linalg::HermitianMatrix correlation(Engine& eng, std::size_t dim);

// Gram-Schmidt of a Gaussian matrix.
linalg::ComplexMatrix unitary(Engine& eng, std::size_t dim);

channel::DensityOperator density(Engine& eng, std::size_t dim);

std::vector<double> probability_vector(Engine& eng, std::size_t n);

// Columns of a Haar-ish isometry from dim to m*dim, split into m blocks;
// trace-preserving by construction.
channel::KrausSet trace_preserving_kraus(Engine& eng, std::size_t dim,
                                         std::size_t m);

// Mixture of random unitaries; unital and trace-preserving.
channel::KrausSet random_unitary_kraus(Engine& eng, std::size_t dim,
                                       std::size_t m);

// Square roots of a random POVM; normal operators, unital and
// trace-preserving.
channel::KrausSet sqrt_povm_kraus(Engine& eng, std::size_t dim, std::size_t m);

// Resamples trace-preserving sets until the unitality defect is at least
// min_defect.
channel::KrausSet nonunital_kraus(Engine& eng, std::size_t dim, std::size_t m,
                                  double min_defect = 1e-6);

// Von Neumann measurement in a random basis followed by repreparation of
// a fixed pure state: A_k = |x><x_k|.
channel::KrausSet measure_and_reprepare(Engine& eng, std::size_t dim);

// A transformation problem together with a certificate known to verify,
// built forwards so randomized suites always start from feasible ground.
struct ForwardInstance {
  transform::TransformProblem problem;
  transform::PiMatrix pi;
};

// Unit probabilities: a correlation candidate times a random final Gram,
// realized as the initial Gram.
ForwardInstance deterministic_feasible_instance(Engine& eng, std::size_t n);

// Arbitrary probabilities: a random PSD candidate shrunk until the overlap
// residual is PSD, with p read off its diagonal.
ForwardInstance probabilistic_feasible_instance(Engine& eng, std::size_t n,
                                                std::size_t d);

}  // namespace qop::rng
