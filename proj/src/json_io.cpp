#include "qdf/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "qdf/error.hpp"

namespace qdf {
namespace {

const Json& field(const Json& doc, const char* key) {
  if (!doc.is_object()) throw ParseError("expected a JSON object");
  auto it = doc.find(key);
  if (it == doc.end()) throw ParseError(std::string("missing field \"") + key + "\"");
  return *it;
}

int positive_int(const Json& v, const char* what) {
  if (!v.is_number_integer() || v.get<std::int64_t>() <= 0 || v.get<std::int64_t>() > (1 << 20)) {
    throw ParseError(std::string(what) + " must be a positive integer");
  }
  return v.get<int>();
}

int non_negative_int(const Json& v, const char* what) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0 || v.get<std::int64_t>() > (1 << 20)) {
    throw ParseError(std::string(what) + " must be a non-negative integer");
  }
  return v.get<int>();
}

void read_part(const Json& rows, Eigen::Index side, const char* name, Matrix& out, bool imag) {
  if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != side) {
    throw ParseError(std::string("\"") + name + "\" must have " + std::to_string(side) + " rows");
  }
  for (Eigen::Index i = 0; i < side; ++i) {
    const Json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != side) {
      throw ParseError(std::string("\"") + name + "\" row " + std::to_string(i) + " must have " +
                       std::to_string(side) + " entries");
    }
    for (Eigen::Index j = 0; j < side; ++j) {
      const Json& v = row[static_cast<std::size_t>(j)];
      if (!v.is_number()) throw ParseError(std::string("\"") + name + "\" entries must be numbers");
      const double d = v.get<double>();
      if (!std::isfinite(d)) throw ParseError("matrix entries must be finite");
      if (imag) {
        out(i, j).imag(d);
      } else {
        out(i, j).real(d);
      }
    }
  }
}

}  // namespace

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_json(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << doc.dump(2) << '\n';
}

Json to_json(const LeggedOperator& x) {
  const Matrix& m = x.matrix();
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json rr = Json::array(), ir = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ir.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ir));
  }
  return {{"legs", x.legs()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

LeggedOperator operator_from_json(const Json& doc) {
  const Json& legs_doc = field(doc, "legs");
  if (!legs_doc.is_array() || legs_doc.empty()) throw ParseError("\"legs\" must be a non-empty array");
  std::vector<int> legs;
  Eigen::Index side = 1;
  for (const Json& v : legs_doc) {
    legs.push_back(positive_int(v, "leg dimension"));
    side *= legs.back();
    if (side > 4096) throw ParseError("operator side exceeds 4096");
  }
  Matrix m(side, side);
  read_part(field(doc, "re"), side, "re", m, false);
  read_part(field(doc, "im"), side, "im", m, true);
  return {std::move(m), std::move(legs)};
}

Functional functional_preset(const std::string& name, int n, std::uint64_t seed) {
  if (name == "trace") return Functional::trace(n);
  if (name == "normalized-trace") return Functional::normalized_trace(n);
  if (name == "random") return Functional::random(n, seed);
  throw InvalidArgument("unknown functional preset \"" + name +
                        "\" (expected trace, normalized-trace or random)");
}

Functional functional_from_json(const Json& doc, int n) {
  if (doc.is_string()) return functional_preset(doc.get<std::string>(), n);
  const LeggedOperator d = operator_from_json(doc);
  if (d.num_legs() != 1 || d.legs()[0] != n) {
    throw InvalidArgument("functional density must have legs [" + std::to_string(n) + "]");
  }
  return Functional(d.matrix());
}

Json to_json(const SymSequence& seq) {
  Json entries = Json::array();
  for (const auto& x : seq.entries()) entries.push_back(to_json(x));
  return {{"m", seq.m()},
          {"n", seq.n()},
          {"L", seq.length()},
          {"rho", to_json(LeggedOperator(seq.rho().density(), {seq.n()}))},
          {"entries", std::move(entries)}};
}

SymSequence sequence_from_json(const Json& doc) {
  const int m = positive_int(field(doc, "m"), "\"m\"");
  const int n = positive_int(field(doc, "n"), "\"n\"");
  const int L = non_negative_int(field(doc, "L"), "\"L\"");
  const Json& entries_doc = field(doc, "entries");
  if (!entries_doc.is_array() || static_cast<int>(entries_doc.size()) != L + 1) {
    throw ParseError("\"entries\" must hold L + 1 = " + std::to_string(L + 1) + " matrices");
  }
  std::vector<LeggedOperator> entries;
  for (const Json& e : entries_doc) entries.push_back(operator_from_json(e));
  return {m, n, functional_from_json(field(doc, "rho"), n), std::move(entries)};
}

Json to_json(const Partition& p) { return p.parts(); }

Json to_json(const ValidationReport& r) {
  Json out{{"ok", r.ok}, {"condition", to_string(r.condition)}};
  if (!r.ok) {
    out["level"] = r.level;
    out["magnitude"] = r.magnitude;
    out["message"] = r.message;
  }
  return out;
}

Json to_json(const FeasibilityReport& r, bool with_witness) {
  Json out{{"level", r.level},
           {"relation", to_string(r.relation)},
           {"verdict", to_string(r.verdict)},
           {"final_residual", r.final_residual},
           {"iterations", r.iterations},
           {"residual_history", r.residual_history}};
  if (with_witness) out["witness"] = r.witness ? to_json(*r.witness) : Json(nullptr);
  return out;
}

Json to_json(const SeparabilityReport& r, bool with_witness) {
  Json levels = Json::array();
  for (const auto& lr : r.levels) levels.push_back(to_json(lr, with_witness));
  Json out{{"verdict", to_string(r.verdict)}, {"levels", std::move(levels)}};
  out["decisive_level"] = r.decisive_level ? Json(*r.decisive_level) : Json(nullptr);
  out["ppt_min_eig"] = r.ppt_min_eig ? Json(*r.ppt_min_eig) : Json(nullptr);
  return out;
}

Json to_json(const ExponentialReport& r) {
  auto failure = [](const BlockFailure& f) {
    return Json{{"level", f.level},
                {"lambda", to_json(f.lambda)},
                {"min_eigenvalue", std::isnan(f.min_eigenvalue) ? Json(nullptr) : Json(f.min_eigenvalue)}};
  };
  Json failures = Json::array();
  for (const auto& f : r.failures) failures.push_back(failure(f));
  return {{"is_exponential", r.is_exponential},
          {"failing_block", r.failing_block ? failure(*r.failing_block) : Json(nullptr)},
          {"failures", std::move(failures)}};
}

Json to_json(const SchurWeylBlock& b) {
  return {{"lambda", to_json(b.lambda)}, {"block_dim", b.block_dim}, {"multiplicity", b.multiplicity}};
}

}  // namespace qdf
