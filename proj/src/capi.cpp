#include "qdf/qdf.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "qdf/boundary.hpp"
#include "qdf/error.hpp"
#include "qdf/json_io.hpp"

struct qdf_operator {
  qdf::LeggedOperator value;
};

struct qdf_functional {
  qdf::Functional value;
};

namespace {

thread_local std::string g_last_error;

template <class F>
qdf_status guard(F&& f) {
  try {
    g_last_error.clear();
    f();
    return QDF_OK;
  } catch (const qdf::ParseError& e) {
    g_last_error = e.what();
    return QDF_ERR_PARSE;
  } catch (const qdf::InvalidArgument& e) {
    g_last_error = e.what();
    return QDF_ERR_INVALID_ARGUMENT;
  } catch (const qdf::DomainError& e) {
    g_last_error = e.what();
    return QDF_ERR_DOMAIN;
  } catch (const qdf::NumericalError& e) {
    g_last_error = e.what();
    return QDF_ERR_NUMERICAL;
  } catch (const nlohmann::json::exception& e) {
    g_last_error = e.what();
    return QDF_ERR_PARSE;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return QDF_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return QDF_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw qdf::InvalidArgument(std::string(what) + " is NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(const qdf::Json& doc, char** out) {
  if (out != nullptr) *out = dup_string(doc.dump());
}

qdf::SolverOptions convert(const qdf_solver_options* opts) {
  qdf::SolverOptions o;
  if (opts == nullptr) return o;
  o.tol = opts->tol;
  o.max_iterations = opts->max_iterations;
  o.plateau_window = opts->plateau_window;
  o.plateau_threshold = opts->plateau_threshold;
  switch (opts->relation) {
    case QDF_RELATION_EXACT: o.relation = qdf::Relation::exact; break;
    case QDF_RELATION_SUB: o.relation = qdf::Relation::sub; break;
    default: throw qdf::InvalidArgument("unknown relation");
  }
  return o;
}

qdf::Json blocks_json(const qdf::BoundaryElement& seq, int max_level) {
  qdf::Json out = qdf::Json::array();
  for (int l = 1; l <= std::min(max_level, seq.length()); ++l) {
    for (const auto& block : qdf::schur_weyl_table(seq.n(), l)) {
      out.push_back({{"lambda", qdf::to_json(block.lambda)},
                     {"block_dim", block.block_dim},
                     {"multiplicity", block.multiplicity},
                     {"block", qdf::to_json(qdf::recover_block(seq, block.lambda))}});
    }
  }
  return out;
}

// Shared tail of both boundary reports.
void sequence_section(const qdf::BoundaryElement& seq, const qdf::Functional& rho,
                      const qdf::SolverOptions& opts, bool verify_bridge, qdf::Json& report) {
  const bool subharmonic = qdf::subharmonic_check(seq, rho);
  report["subharmonic"] = subharmonic;
  const qdf::SymSequence as_k(seq.m(), seq.n(), rho, seq.entries());
  const qdf::ValidationReport validation = qdf::validate_k_prefix(as_k);
  report["validation"] = qdf::to_json(validation);
  if (verify_bridge) {
    report["bridge_agrees"] = (validation.ok == subharmonic);
    if (validation.ok != subharmonic) {
      throw qdf::NumericalError("subharmonic_check and validate_k_prefix disagree");
    }
  }
  if (subharmonic && seq.length() >= 1) {
    const auto image = qdf::separable_image_check(seq, rho, 3, opts);
    report["separable_image"] = qdf::to_json(image.separability, false);
    report["contradiction"] = image.contradiction;
  }
}

}  // namespace

extern "C" {

const char* qdf_version(void) { return "0.1.0"; }

const char* qdf_last_error(void) { return g_last_error.c_str(); }

void qdf_string_free(char* s) { std::free(s); }

qdf_status qdf_operator_from_json(const char* json, qdf_operator** out) {
  return guard([&] {
    require(json, "json");
    require(out, "out");
    *out = new qdf_operator{qdf::operator_from_json(qdf::parse_json(json))};
  });
}

qdf_status qdf_operator_load(const char* path, qdf_operator** out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    *out = new qdf_operator{qdf::operator_from_json(qdf::read_json_file(path))};
  });
}

qdf_status qdf_operator_create(const int* legs, size_t num_legs, const double* re, const double* im,
                               qdf_operator** out) {
  return guard([&] {
    require(legs, "legs");
    require(re, "re");
    require(out, "out");
    std::vector<int> l(legs, legs + num_legs);
    Eigen::Index side = 1;
    for (int d : l) {
      if (d <= 0) throw qdf::InvalidArgument("leg dimensions must be positive");
      side *= d;
    }
    qdf::Matrix m(side, side);
    for (Eigen::Index i = 0; i < side; ++i) {
      for (Eigen::Index j = 0; j < side; ++j) {
        const Eigen::Index k = i * side + j;
        m(i, j) = qdf::Complex(re[k], im ? im[k] : 0.0);
      }
    }
    *out = new qdf_operator{qdf::LeggedOperator(std::move(m), std::move(l))};
  });
}

void qdf_operator_free(qdf_operator* op) { delete op; }

qdf_status qdf_operator_to_json(const qdf_operator* op, char** out) {
  return guard([&] {
    require(op, "operator");
    require(out, "out");
    emit(qdf::to_json(op->value), out);
  });
}

qdf_status qdf_operator_legs(const qdf_operator* op, int* legs, size_t capacity, size_t* num_legs) {
  return guard([&] {
    require(op, "operator");
    const auto& l = op->value.legs();
    if (num_legs) *num_legs = l.size();
    if (legs) {
      for (size_t i = 0; i < std::min(capacity, l.size()); ++i) legs[i] = l[i];
    }
  });
}

qdf_status qdf_operator_tensor(const qdf_operator* x, const qdf_operator* y, qdf_operator** out) {
  return guard([&] {
    require(x, "x");
    require(y, "y");
    require(out, "out");
    *out = new qdf_operator{qdf::tensor(x->value, y->value)};
  });
}

qdf_status qdf_operator_partial_transpose(const qdf_operator* x, int leg, qdf_operator** out) {
  return guard([&] {
    require(x, "x");
    require(out, "out");
    *out = new qdf_operator{qdf::partial_transpose(x->value, leg)};
  });
}

qdf_status qdf_operator_min_eig(const qdf_operator* x, double* out) {
  return guard([&] {
    require(x, "x");
    require(out, "out");
    *out = qdf::min_eigenvalue(x->value);
  });
}

qdf_status qdf_operator_is_psd(const qdf_operator* x, double tol, int* out) {
  return guard([&] {
    require(x, "x");
    require(out, "out");
    *out = qdf::is_psd(x->value, tol) ? 1 : 0;
  });
}

qdf_status qdf_functional_preset(const char* name, int n, uint64_t seed, qdf_functional** out) {
  return guard([&] {
    require(name, "name");
    require(out, "out");
    *out = new qdf_functional{qdf::functional_preset(name, n, seed)};
  });
}

qdf_status qdf_functional_from_operator(const qdf_operator* density, qdf_functional** out) {
  return guard([&] {
    require(density, "density");
    require(out, "out");
    if (density->value.num_legs() != 1) {
      throw qdf::InvalidArgument("functional density must have a single leg");
    }
    *out = new qdf_functional{qdf::Functional(density->value.matrix())};
  });
}

void qdf_functional_free(qdf_functional* rho) { delete rho; }

void qdf_solver_options_default(qdf_solver_options* opts) {
  if (opts == nullptr) return;
  const qdf::SolverOptions d;
  opts->tol = d.tol;
  opts->max_iterations = d.max_iterations;
  opts->plateau_window = d.plateau_window;
  opts->plateau_threshold = d.plateau_threshold;
  opts->relation = d.relation == qdf::Relation::exact ? QDF_RELATION_EXACT : QDF_RELATION_SUB;
}

qdf_status qdf_extend_check(const qdf_operator* a, const qdf_functional* rho, int max_l,
                            const qdf_solver_options* opts, int with_witness, qdf_verdict* verdict,
                            char** report_json) {
  return guard([&] {
    require(a, "a");
    require(rho, "rho");
    const auto report = qdf::separability_verdict(a->value, rho->value, max_l, convert(opts));
    if (verdict) {
      switch (report.verdict) {
        case qdf::SeparabilityVerdict::separable_evidence: *verdict = QDF_SEPARABLE_EVIDENCE; break;
        case qdf::SeparabilityVerdict::entangled_evidence: *verdict = QDF_ENTANGLED_EVIDENCE; break;
        case qdf::SeparabilityVerdict::undetermined: *verdict = QDF_UNDETERMINED; break;
      }
    }
    emit(qdf::to_json(report, with_witness != 0), report_json);
  });
}

qdf_status qdf_extension_feasibility(const qdf_operator* a, const qdf_functional* rho, int l,
                                     const qdf_solver_options* opts, char** report_json) {
  return guard([&] {
    require(a, "a");
    require(rho, "rho");
    require(report_json, "report_json");
    emit(qdf::to_json(qdf::sub_extension_feasibility(a->value, rho->value, l, convert(opts))),
         report_json);
  });
}

qdf_status qdf_ppt_min_eig(const qdf_operator* a, double* out) {
  return guard([&] {
    require(a, "a");
    require(out, "out");
    *out = qdf::ppt_min_eig(a->value);
  });
}

qdf_status qdf_werner_state(double p, qdf_operator** out) {
  return guard([&] {
    require(out, "out");
    *out = new qdf_operator{qdf::werner_state(p)};
  });
}

qdf_status qdf_boundary_grouplike(const qdf_operator* t, const qdf_functional* rho, int L,
                                  const qdf_solver_options* opts, int verify_bridge,
                                  char** report_json) {
  return guard([&] {
    require(t, "t");
    require(rho, "rho");
    require(report_json, "report_json");
    if (t->value.num_legs() != 1) throw qdf::InvalidArgument("t must have a single leg");
    const qdf::GroupLike g(t->value.matrix());
    if (rho->value.dim() != g.n()) throw qdf::InvalidArgument("rho and t dimensions differ");
    const auto options = convert(opts);

    qdf::Json report{{"kind", "grouplike"}, {"n", g.n()}, {"L", L}};
    const qdf::Complex det = g.det();
    report["det"] = {det.real(), det.imag()};
    const auto expo = qdf::exponential_test(g, L);
    report["exponential"] = qdf::to_json(expo);
    try {
      const double v = qdf::e_rho_value(g, rho->value);
      report["e_rho_value"] = v;
      report["in_e_rho"] = expo.is_exponential && v <= 1.0 + qdf::kDefaultPsdTol;
    } catch (const qdf::DomainError& e) {
      report["e_rho_value"] = nullptr;
      report["e_rho_error"] = e.what();
      report["in_e_rho"] = false;
    }
    const auto seq = qdf::grouplike_sequence(qdf::LeggedOperator::identity({1}), g, L, rho->value);
    sequence_section(seq, rho->value, options, verify_bridge != 0, report);
    report["blocks"] = blocks_json(seq, 2);
    emit(report, report_json);
  });
}

qdf_status qdf_boundary_sequence(const char* bundle_json, const qdf_functional* rho,
                                 const qdf_solver_options* opts, int verify_bridge,
                                 char** report_json) {
  return guard([&] {
    require(bundle_json, "bundle_json");
    require(report_json, "report_json");
    const qdf::SymSequence seq = qdf::sequence_from_json(qdf::parse_json(bundle_json));
    const qdf::Functional& r = rho ? rho->value : seq.rho();
    if (r.dim() != seq.n()) throw qdf::InvalidArgument("rho and bundle dimensions differ");
    if (seq.length() < 1) throw qdf::InvalidArgument("bundle needs at least two entries");

    qdf::Json report{{"kind", "sequence"}, {"m", seq.m()}, {"n", seq.n()}, {"L", seq.length()}};
    sequence_section(seq, r, convert(opts), verify_bridge != 0, report);
    if (seq[0].max_abs() > 0.0 && std::abs(seq[0].trace()) > 0.0) {
      const auto probe = qdf::product_probe(seq);
      report["product_probe"] = {{"is_product", probe.is_product},
                                 {"worst_relative_residual", probe.worst_relative_residual}};
    }
    report["blocks"] = blocks_json(seq, 2);
    emit(report, report_json);
  });
}

qdf_status qdf_schur_table(int n, int l, char** report_json) {
  return guard([&] {
    require(report_json, "report_json");
    qdf::Json blocks = qdf::Json::array();
    std::int64_t total = 0;
    for (const auto& b : qdf::schur_weyl_table(n, l)) {
      blocks.push_back(qdf::to_json(b));
      total += b.block_dim * b.multiplicity;
    }
    emit({{"n", n}, {"l", l}, {"blocks", std::move(blocks)}, {"total_dimension", total}},
         report_json);
  });
}

}  // extern "C"
