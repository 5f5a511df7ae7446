// Acceptance gate for the atwist engine: twelve end-to-end criteria, one
// printed line each.  Exits nonzero when any criterion fails.  Tolerances and
// sample counts are stated inline; everything runs off the golden manifests.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "atwist/calculus.hpp"
#include "atwist/checks.hpp"
#include "atwist/errors.hpp"
#include "atwist/manifest.hpp"
#include "atwist/polarize.hpp"
#include "atwist/prequantum.hpp"
#include "atwist/quadrature.hpp"
#include "atwist/random_fields.hpp"
#include "atwist/sampler.hpp"
#include "atwist/structure.hpp"

using namespace atwist;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr Complex kTwoPiI{0.0, 2.0 * kPi};

int failures = 0;

double seconds(const std::chrono::steady_clock::time_point& from) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - from).count();
}

template <typename Fn>
void criterion(int n, const std::string& what, Fn&& body) {
    bool ok = false;
    std::string note;
    try {
        ok = body(note);
    } catch (const std::exception& e) {
        note = std::string("threw: ") + e.what();
    }
    std::printf("[%s] criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", n, what.c_str(),
                note.empty() ? "" : " -- ", note.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string manifest_path(const char* name) {
    return std::string(ATWIST_MANIFEST_DIR) + "/" + name;
}

AtpPtr structure_from(const Manifest& m) {
    GradedField phi = m.phi ? *m.phi : GradedField::form(m.chart, 3);
    GradedField theta = m.theta ? *m.theta : GradedField::form(m.chart, 1);
    return AtpStructure::make(*m.Lambda, phi, theta);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

} // namespace

int main() {
    const Manifest example = load_manifest(manifest_path("example_1_1_5.atw"));
    const Manifest broken = load_manifest(manifest_path("non_poisson.atw"));
    const Manifest remark = load_manifest(manifest_path("remark_nb3_4.atw"));
    const Manifest polar = load_manifest(manifest_path("section_6.atw"));
    const Sampler base; // 64 samples, tol 1e-9, seed 0

    criterion(1, "all structure checks pass on the exponential example in under 10 s",
              [&](std::string& note) {
                  auto t0 = std::chrono::steady_clock::now();
                  std::vector<CheckReport> reports = run_validate(example, RunOptions{});
                  double wall = seconds(t0);
                  bool ok = !reports.empty() && wall < 10.0;
                  double worst = 0.0;
                  for (const CheckReport& r : reports) {
                      ok = ok && r.status == CheckStatus::Pass;
                      worst = std::max(worst, r.max_residual);
                  }
                  note = std::to_string(reports.size()) + " checks, max residual " + fmt(worst) +
                         ", " + fmt(wall) + " s";
                  return ok;
              });

    criterion(2, "the twisted coboundary squares to zero on 20 random multivectors",
              [&](std::string& note) {
                  AtpPtr S = structure_from(example);
                  FieldRng rng(mix_seed(0, "acceptance.d2"));
                  double worst = 0.0;
                  bool ok = true;
                  for (int r = 0; r < 20; ++r) {
                      GradedField v = random_multivector(example.chart, rng.below(3), rng);
                      GradedField ddv = coboundary_field(*S, coboundary_field(*S, v));
                      FieldEquivReport fr =
                          field_is_zero(ddv, base, "acceptance.d2." + std::to_string(r));
                      ok = ok && fr.pass;
                      worst = std::max(worst, fr.max_residual);
                  }
                  note = "grades 0..2, max residual " + fmt(worst);
                  return ok;
              });

    criterion(3, "the anchor intertwines d with the coboundary; the broken bivector is caught",
              [&](std::string& note) {
                  AtpPtr S = structure_from(example);
                  FieldRng rng(mix_seed(0, "acceptance.chain"));
                  double worst = 0.0;
                  bool ok = true;
                  for (int r = 0; r < 20; ++r) {
                      GradedField mu = random_form(example.chart, 1 + rng.below(2), rng);
                      FieldEquivReport fr = field_is_zero(chain_map_residual(*S, mu), base,
                                                          "acceptance.chain." + std::to_string(r));
                      ok = ok && fr.pass;
                      worst = std::max(worst, fr.max_residual);
                  }

                  AtpPtr B = structure_from(broken);
                  FieldRng brng(mix_seed(0, "acceptance.chain.broken"));
                  int detected = 0;
                  for (int r = 0; r < 20; ++r) {
                      GradedField mu = random_form(broken.chart, 1 + brng.below(2), brng);
                      FieldEquivReport fr = field_is_zero(chain_map_residual(*B, mu), base,
                                                          "acceptance.broken." + std::to_string(r));
                      if (!fr.pass && fr.max_residual > 1e-3) ++detected;
                  }
                  note = "max residual " + fmt(worst) + "; " + std::to_string(detected) +
                         "/20 broken draws flagged";
                  return ok && detected >= 1;
              });

    criterion(4, "the bracket jacobiator vanishes, and the broken bivector reports -1",
              [&](std::string& note) {
                  AtpPtr S = structure_from(example);
                  FieldRng rng(mix_seed(0, "acceptance.jacobi"));
                  bool ok = true;
                  double worst = 0.0;
                  for (int r = 0; r < 10; ++r) {
                      ScalarExpr f = random_polynomial(example.chart, rng);
                      ScalarExpr g = random_polynomial(example.chart, rng);
                      ScalarExpr h = random_polynomial(example.chart, rng);
                      EquivReport er = equiv(jacobiator_residual(*S, f, g, h), ScalarExpr{},
                                             *example.chart, base,
                                             "acceptance.jacobi." + std::to_string(r));
                      ok = ok && er.pass;
                      worst = std::max(worst, er.max_residual);
                  }

                  AtpPtr B = structure_from(broken);
                  ScalarExpr resid =
                      jacobiator_residual(*B, coordinate(1), coordinate(2), coordinate(3));
                  EquivReport counter =
                      equiv(resid, constant(-1.0), *broken.chart, base, "acceptance.jacobi.c");
                  note = "max residual " + fmt(worst) + "; counterexample offset " +
                         fmt(counter.max_residual);
                  return ok && counter.pass;
              });

    criterion(5, "the exactness certificate closes, and a 1% scaling of eta breaks it",
              [&](std::string& note) {
                  AtpPtr S = structure_from(remark);
                  PrequantCertificate cert{*remark.Z, *remark.eta, remark.vartheta};
                  ValidationReport good = check_certificate(S, cert, base);

                  ScalarExpr scale = constant(1.01);
                  PrequantCertificate off{*remark.Z, scale * *remark.eta,
                                          scale * *remark.vartheta};
                  ValidationReport bad = check_certificate(S, off, base);
                  bool broke = false;
                  double resid = 0.0;
                  for (const NamedResult& nr : bad.results)
                      if (nr.name == "certificate_equation") {
                          broke = !nr.pass && nr.max_residual > 1e-3;
                          resid = nr.max_residual;
                      }
                  note = "closed at " + fmt(good.max_residual()) + "; scaled eta leaves gap " +
                         fmt(resid);
                  return good.pass() && broke;
              });

    criterion(6, "curvature of the certificate derivative is -2 pi i Lambda and matches d omega",
              [&](std::string& note) {
                  AtpPtr S = structure_from(remark);
                  PrequantCertificate cert{*remark.Z, *remark.eta, remark.vartheta};
                  ContravariantD D = build_derivative(S, cert);
                  GradedField P = curvature_bivector(D, base);
                  FieldEquivReport law =
                      field_is_zero(P + kTwoPiI * S->Lambda(), base, "acceptance.curv.law");

                  // with Z = 0 the curvature must equal the anchored d omega
                  FieldRng rng(mix_seed(0, "acceptance.curv.omega"));
                  GradedField zeroZ = GradedField::multivector(remark.chart, 1);
                  bool cross = true;
                  double worst = law.max_residual;
                  for (int r = 0; r < 5; ++r) {
                      GradedField omega =
                          random_form(remark.chart, 1, rng, {.complex_coeffs = true});
                      ContravariantD Dw = make_derivative(S, omega, zeroZ);
                      GradedField Pw = curvature_bivector(Dw, base);
                      FieldEquivReport fr =
                          field_equiv(Pw, anchor_k(S->Lambda(), exterior_d(omega)), base,
                                      "acceptance.curv." + std::to_string(r));
                      cross = cross && fr.pass;
                      worst = std::max(worst, fr.max_residual);
                  }
                  note = "max residual " + fmt(worst);
                  return law.pass && cross;
              });

    criterion(7, "the hat assignment is a bracket homomorphism, and needs its connection terms",
              [&](std::string& note) {
                  AtpPtr S = structure_from(remark);
                  PrequantCertificate cert{*remark.Z, *remark.eta, remark.vartheta};
                  ContravariantD D = build_derivative(S, cert);
                  FieldRng rng(mix_seed(0, "acceptance.homo"));
                  bool ok = true;
                  double worst = 0.0;
                  for (int r = 0; r < 10; ++r) {
                      ScalarExpr f = random_polynomial(remark.chart, rng);
                      ScalarExpr g = random_polynomial(remark.chart, rng);
                      ScalarExpr u = random_polynomial(remark.chart, rng,
                                                       {.complex_coeffs = true});
                      EquivReport er = equiv(homomorphism_residual(D, f, g, u), ScalarExpr{},
                                             *remark.chart, base,
                                             "acceptance.homo." + std::to_string(r));
                      ok = ok && er.pass;
                      worst = std::max(worst, er.max_residual);
                  }

                  // the plain anchor action (no omega, no Z) is not a homomorphism
                  ContravariantD bare = bare_derivative(S);
                  EquivReport off = equiv(
                      homomorphism_residual(bare, coordinate(0), coordinate(1), constant(1.0)),
                      ScalarExpr{}, *remark.chart, base, "acceptance.homo.bare");
                  note = "max residual " + fmt(worst) + "; bare defect " + fmt(off.max_residual);
                  return ok && !off.pass && off.max_residual > 1e-3;
              });

    criterion(8, "the derivative along real 1-forms is symmetric for the pointwise pairing",
              [&](std::string& note) {
                  AtpPtr S = structure_from(remark);
                  PrequantCertificate cert{*remark.Z, *remark.eta, remark.vartheta};
                  ContravariantD D = build_derivative(S, cert);
                  FieldRng rng(mix_seed(0, "acceptance.herm"));
                  bool ok = true;
                  double worst = 0.0;
                  for (int r = 0; r < 10; ++r) {
                      GradedField a = random_form(remark.chart, 1, rng); // real coefficients
                      ScalarExpr u1 = random_polynomial(remark.chart, rng,
                                                        {.complex_coeffs = true});
                      ScalarExpr u2 = random_polynomial(remark.chart, rng,
                                                        {.complex_coeffs = true});
                      EquivReport er = equiv(hermitian_residual(D, a, u1, u2), ScalarExpr{},
                                             *remark.chart, base,
                                             "acceptance.herm." + std::to_string(r));
                      ok = ok && er.pass;
                      worst = std::max(worst, er.max_residual);
                  }
                  note = "max residual " + fmt(worst);
                  return ok;
              });

    criterion(9, "holomorphic polarization: isotropy, Wirtinger membership, kernel section",
              [&](std::string& note) {
                  AtpPtr S = structure_from(polar);
                  Polarization P = make_polarization(polar.polarization);
                  ValidationReport iso = isotropy_check(*S, P, base);

                  FieldRng rng(mix_seed(0, "acceptance.inP"));
                  bool agree = true;
                  for (int r = 0; r < 10; ++r) {
                      ScalarExpr h = random_polynomial(polar.chart, rng,
                                                       {.complex_coeffs = r % 2 == 1});
                      bool holo =
                          equiv(wirtinger(*polar.chart, h, 0, true), ScalarExpr{}, *polar.chart,
                                base, "acceptance.w1." + std::to_string(r))
                              .pass &&
                          equiv(wirtinger(*polar.chart, h, 1, true), ScalarExpr{}, *polar.chart,
                                base, "acceptance.w2." + std::to_string(r))
                              .pass;
                      agree = agree && in_P(*S, P, h, base).member == holo;
                  }

                  GradedField zeroOmega = GradedField::form(polar.chart, 1);
                  GradedField zeroZ = GradedField::multivector(polar.chart, 1);
                  ContravariantD D = make_derivative(S, zeroOmega, zeroZ);
                  KernelReport u0 = h0_residuals(D, P, QuantSection{polar.sections[0].second},
                                                 base);

                  // dropping the second factor from the section leaves one leg unbalanced
                  ScalarExpr half = exp(constant(-0.5) * coordinate(0) + coordinate(4));
                  KernelReport lop = h0_residuals(D, P, QuantSection{half}, base);
                  bool lopsided = !lop.member && lop.checks.size() == 2 && lop.checks[0].pass &&
                                  !lop.checks[1].pass && lop.max_residual > 1e-3;
                  note = "isotropy " + fmt(iso.max_residual()) + ", kernel residual " +
                         fmt(u0.max_residual);
                  return iso.pass() && agree && u0.member && u0.max_residual <= 1e-9 && lopsided;
              });

    criterion(10, "the observable hat preserves the kernel and acts as 2 pi i t there",
              [&](std::string& note) {
                  AtpPtr S = structure_from(polar);
                  Polarization P = make_polarization(polar.polarization);
                  GradedField zeroOmega = GradedField::form(polar.chart, 1);
                  GradedField zeroZ = GradedField::multivector(polar.chart, 1);
                  ContravariantD D = make_derivative(S, zeroOmega, zeroZ);

                  const ScalarExpr& t = polar.observables[0].second;
                  QuantSection u0{polar.sections[0].second};
                  QuantSection image = extended_hat(D, t, u0);
                  KernelReport back = h0_residuals(D, P, image, base);
                  EquivReport phase = equiv(image.u, constant(kTwoPiI) * t * u0.u, *polar.chart,
                                            base, "acceptance.hat.phase");
                  note = "kernel residual " + fmt(back.max_residual) + ", phase offset " +
                         fmt(phase.max_residual);
                  return back.member && phase.pass;
              });

    criterion(11, "the hat operator is anti-Hermitian for the midpoint inner product (1%)",
              [&](std::string& note) {
                  auto t0 = std::chrono::steady_clock::now();
                  AtpPtr S = structure_from(polar);
                  GradedField zeroOmega = GradedField::form(polar.chart, 1);
                  GradedField zeroZ = GradedField::multivector(polar.chart, 1);
                  ContravariantD D = make_derivative(S, zeroOmega, zeroZ);

                  const QuadratureBlock& q = *polar.quadrature;
                  QuadratureGrid grid;
                  grid.points_per_axis = 17;
                  QuantSection u1{*q.u1};
                  QuantSection u2{*q.u2};
                  QuantSection hu1 = extended_hat(D, *q.h, u1);
                  QuantSection hu2 = extended_hat(D, *q.h, u2);
                  InnerProductResult left = inner_product(hu1, u2, *polar.chart, grid);
                  InnerProductResult right = inner_product(u1, hu2, *polar.chart, grid);
                  InnerProductResult n1 = inner_product(u1, u1, *polar.chart, grid);
                  InnerProductResult n2 = inner_product(u2, u2, *polar.chart, grid);
                  double defect = std::abs(left.value + right.value);
                  double scale = std::abs(n1.value) + std::abs(n2.value);
                  double wall = seconds(t0);
                  bool leak = left.boundary_leak || right.boundary_leak || n1.boundary_leak ||
                              n2.boundary_leak;
                  note = "defect/scale " + fmt(scale > 0 ? defect / scale : defect) + ", " +
                         fmt(wall) + " s";
                  return defect <= 1e-2 * scale && !leak && wall < 180.0;
              });

    criterion(12, "manifests round-trip, malformed inputs give located errors, reports are stable",
              [&](std::string& note) {
                  bool trips = true;
                  for (const char* name : {"example_1_1_5.atw", "remark_nb3_4.atw",
                                           "section_6.atw", "non_poisson.atw"}) {
                      Manifest m = load_manifest(manifest_path(name));
                      trips = trips && struct_eq(m, parse_manifest(serialize_manifest(m)));
                  }

                  const std::string chart = "[chart]\ndim = 3\ncoords = x1 x2 x3\nbox = -1 1\n";
                  int caught = 0;
                  try {
                      parse_manifest(chart + "[Lambda]\n(2,1) = 1\n");
                  } catch (const ParseError& e) {
                      if (e.kind() == ParseErrorKind::DuplicateComponent && e.line() == 6)
                          ++caught;
                  }
                  try {
                      parse_manifest(chart + "[scalars]\nf = g\ng = f\n");
                  } catch (const ParseError& e) {
                      if (e.kind() == ParseErrorKind::CyclicScalarDefinition) ++caught;
                  }
                  try {
                      parse_manifest(chart + "[Lambda]\n(1,2) = nope\n");
                  } catch (const ParseError& e) {
                      if (e.kind() == ParseErrorKind::UnknownIdentifier && e.token() == "nope")
                          ++caught;
                  }

                  RunOptions opts;
                  opts.samples = 16;
                  std::string one = reports_to_json(run_validate(example, opts));
                  std::string two = reports_to_json(run_validate(example, opts));
                  bool stable = one == two;
                  note = std::to_string(caught) + "/3 malformed cases located";
                  return trips && caught == 3 && stable;
              });

    std::printf("%s: %d of 12 criteria failed\n", failures ? "FAIL" : "OK", failures);
    return failures ? 1 : 0;
}
