// Copyright 2026 The bdris Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bdris/gradient.hpp"

#include <string>

#include "bdris/errors.hpp"
#include "bdris/fisher.hpp"

namespace bdris {

namespace {

void require_unitary(const ComplexMatrix& phi, const char* what) {
  if (phi.rows() < 1 || phi.rows() != phi.cols()) {
    throw InvalidArgument(std::string(what) + ": Phi must be square");
  }
  const double drift = unitarity_report(phi).frobenius_drift;
  if (!(drift <= kUnitaryTolerance)) {
    throw InvalidArgument(std::string(what) + ": Phi is not unitary (drift " +
                          std::to_string(drift) + ")");
  }
}

void require_same_shape(const ComplexMatrix& x, const ComplexMatrix& y, const char* what) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw InvalidArgument(std::string(what) + ": shape mismatch");
  }
}

// Shared first half of the gradient: the vectors every term is built from.
struct GradientTerms {
  ComplexVector w0;  // K Phi a     = alpha* G^H h
  ComplexVector w1;  // K Phi a'    = alpha* G^H h_dot
  Complex trace_a;   // h_dot^H h
  double trace_b;    // ||h||^2
};

GradientTerms gradient_terms(const ChannelModel& model, const ComplexMatrix& phi) {
  if (phi.rows() != model.n_r() || phi.cols() != model.n_r()) {
    throw InvalidArgument("gradient: Phi does not match N_R");
  }
  const ComplexVector h = model.h_from(phi * model.a_ris_theta());
  const ComplexVector h_dot = model.h_from(phi * model.a_ris_dot());
  const double trace_b = h.squaredNorm();
  if (!(trace_b > kEpsChannel)) {
    throw DegenerateScene("gradient: cascaded channel energy at or below the degeneracy threshold");
  }
  const Complex alpha_conj = std::conj(model.scene().alpha);
  return {alpha_conj * (model.g_mat().adjoint() * h),
          alpha_conj * (model.g_mat().adjoint() * h_dot), h_dot.dot(h), trace_b};
}

}  // namespace

GradientWorkspace gradient_workspace(const ChannelModel& model, const ComplexMatrix& phi) {
  const GradientTerms t = gradient_terms(model, phi);
  const ComplexVector& a = model.a_ris_theta();
  const ComplexVector& a_dot = model.a_ris_dot();

  GradientWorkspace ws;
  ws.a_mat = t.trace_a;
  ws.b_tr = t.trace_b;
  ws.omega = std::conj(t.trace_a) * (a * a_dot.adjoint()) + t.trace_a * (a_dot * a.adjoint());
  ws.lambda2 = t.w1 * a_dot.adjoint();
  // K Phi omega, expanded so no N_R^3 product is formed.
  ws.c2 = std::conj(t.trace_a) * (t.w0 * a_dot.adjoint()) + t.trace_a * (t.w1 * a.adjoint());
  ws.d2 = t.w0 * a.adjoint();
  ws.euclidean = ws.lambda2 - ws.c2 / t.trace_b +
                 (std::norm(t.trace_a) / (t.trace_b * t.trace_b)) * ws.d2;
  return ws;
}

ComplexMatrix euclidean_gradient(const ChannelModel& model, const ComplexMatrix& phi) {
  const GradientTerms t = gradient_terms(model, phi);
  const ComplexVector& a = model.a_ris_theta();
  const ComplexVector& a_dot = model.a_ris_dot();
  const double b = t.trace_b;
  // Collect the three outer products by their right factor.
  const ComplexVector left_a_dot = t.w1 - (std::conj(t.trace_a) / b) * t.w0;
  const ComplexVector left_a = (std::norm(t.trace_a) / (b * b)) * t.w0 - (t.trace_a / b) * t.w1;
  return left_a_dot * a_dot.adjoint() + left_a * a.adjoint();
}

ComplexMatrix euclidean_gradient(const ScatteringMatrix& phi, const Scenario& scene) {
  phi.validate();
  return euclidean_gradient(ChannelModel(scene), phi.matrix());
}

ComplexMatrix riemannian_gradient(const ComplexMatrix& phi, const ComplexMatrix& gamma_euc) {
  require_unitary(phi, "riemannian_gradient");
  require_same_shape(phi, gamma_euc, "riemannian_gradient");
  return gamma_euc - phi * gamma_euc.adjoint() * phi;
}

ComplexMatrix geodesic_gradient(const ComplexMatrix& phi, const ComplexMatrix& gamma_euc) {
  require_unitary(phi, "geodesic_gradient");
  require_same_shape(phi, gamma_euc, "geodesic_gradient");
  const ComplexMatrix x = gamma_euc * phi.adjoint();
  return x - x.adjoint();
}

double riemannian_metric(const ComplexMatrix& x, const ComplexMatrix& y) {
  require_same_shape(x, y, "riemannian_metric");
  // Re tr(X Y^H) = Re sum_ij X_ij conj(Y_ij)
  return 0.5 * (x.array() * y.array().conjugate()).sum().real();
}

double tangent_residual(const ComplexMatrix& phi, const ComplexMatrix& z) {
  require_same_shape(phi, z, "tangent_residual");
  const ComplexMatrix m = phi.adjoint() * z;
  return (m + m.adjoint()).norm() / (1.0 + z.norm());
}

}  // namespace bdris
