#include "ucq/io.h"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

namespace ucq {

namespace {

constexpr double kChannelTol = 1e-9;

int require_positive_int(const Json& doc, const char* key) {
  if (!doc.contains(key)) throw ValidationError(fmt::format("channel file: missing field '{}'", key));
  const Json& v = doc.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    throw ValidationError(fmt::format("channel file: field '{}' must be a positive integer", key));
  }
  return v.get<int>();
}

Matrix parse_matrix(const Json& m, int d, std::size_t index) {
  auto bad = [&](const std::string& what) {
    return ValidationError(fmt::format("channel file: matrices[{}]: {}", index, what));
  };
  if (!m.is_array() || static_cast<int>(m.size()) != d) throw bad(fmt::format("expected {} rows", d));
  Matrix out(d, d);
  for (int i = 0; i < d; ++i) {
    const Json& row = m[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != d) throw bad(fmt::format("row {} must have {} entries", i, d));
    for (int j = 0; j < d; ++j) {
      const Json& e = row[static_cast<std::size_t>(j)];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw bad(fmt::format("entry ({}, {}) must be a [re, im] pair", i, j));
      }
      out(i, j) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return out;
}

}  // namespace

Channel parse_channel(const Json& doc) {
  if (!doc.is_object()) throw ValidationError("channel file: top level must be an object");
  const int d = require_positive_int(doc, "d");
  const int k = require_positive_int(doc, "k");
  if (!doc.contains("matrices") || !doc.at("matrices").is_array()) {
    throw ValidationError("channel file: missing array field 'matrices'");
  }
  const Json& ms = doc.at("matrices");
  if (static_cast<int>(ms.size()) != k) {
    throw ValidationError(fmt::format("channel file: k = {} but {} matrices given", k, ms.size()));
  }
  std::vector<DensityOperator> states;
  for (std::size_t a = 0; a < ms.size(); ++a) {
    Matrix m = parse_matrix(ms[a], d, a);
    double herm = hermiticity_residue(m);
    if (herm > kChannelTol) {
      throw ValidationError(fmt::format("channel file: matrices[{}]: not Hermitian (residue {:.3g})", a, herm));
    }
    HermitianOperator op(m);
    double tr = op.trace();
    if (std::abs(tr - 1.0) > kChannelTol) {
      throw ValidationError(fmt::format("channel file: matrices[{}]: trace {} is not 1", a, tr));
    }
    double lo = op.min_eigenvalue();
    if (lo < -kChannelTol) {
      throw ValidationError(
          fmt::format("channel file: matrices[{}]: not positive semidefinite (min eigenvalue {:.6g})", a, lo));
    }
    states.emplace_back(op, 1e-8);
  }
  return Channel(std::move(states));
}

Channel load_channel(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(fmt::format("cannot open channel file {}", path.string()));
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError(fmt::format("channel file {}: {}", path.string(), e.what()));
  }
  return parse_channel(doc);
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Json channel_to_json(const Channel& w) {
  Json ms = Json::array();
  for (const auto& s : w.states()) ms.push_back(matrix_to_json(s.matrix()));
  return {{"d", w.d()}, {"k", w.k()}, {"matrices", std::move(ms)}};
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_double(double v) { return fmt::format("{}", v); }

void write_experiment_csv(std::ostream& out, const std::vector<ExperimentRow>& rows, double unit_scale) {
  out << kExperimentCsvHeader << "\r\n";
  for (const auto& r : rows) {
    out << r.n << ',' << r.m << ',' << csv_field(format_double(r.threshold)) << ','
        << csv_field(format_double(r.epsilon)) << ',' << csv_field(format_double(r.rate_empirical / unit_scale))
        << ',' << csv_field(format_double(r.exponent_theory / unit_scale)) << ',' << r.seed << "\r\n";
  }
}

Json experiment_summary(const ExperimentResult& res, double rate, double unit_scale) {
  Json rows = Json::array();
  for (const auto& r : res.rows) {
    rows.push_back({{"n", r.n},
                    {"M", r.m},
                    {"C", r.threshold},
                    {"epsilon", r.epsilon},
                    {"rate_empirical", std::isfinite(r.rate_empirical) ? Json(r.rate_empirical / unit_scale) : Json()},
                    {"seed", r.seed}});
  }
  return {{"rate", rate / unit_scale},
          {"units", unit_scale == 1.0 ? "nats" : "bits"},
          {"mutual_information", res.mutual_information / unit_scale},
          {"theory", {{"exponent", res.theory.value / unit_scale}, {"t_star", res.theory.t_star},
                      {"positive", res.theory.positive()}}},
          {"notes", res.notes},
          {"rows", std::move(rows)}};
}

Json sequence_to_json(const Sequence& x) { return x.symbols; }

Json certificate_to_json(const PackingCertificate& cert) {
  Json entries = Json::array();
  for (const auto& e : cert.entries) {
    Json rows = Json::array();
    for (const auto& r : e.v.rows) rows.push_back(r.counts());
    entries.push_back({{"word", e.word},
                       {"conditional_type", std::move(rows)},
                       {"class_size", e.class_size},
                       {"count", e.count},
                       {"allowed", e.allowed},
                       {"ok", e.ok()}});
  }
  Json sym = Json::array();
  for (const auto& e : cert.symmetrized) {
    sym.push_back({{"word", e.word}, {"other", e.other}, {"lhs", e.lhs}, {"rhs", e.rhs}, {"ok", e.ok()}});
  }
  return {{"passed", cert.passed()},
          {"distinct", cert.distinct},
          {"same_type", cert.same_type},
          {"surrogate_ok", cert.surrogate_ok},
          {"symmetrized_ok", cert.symmetrized_ok},
          {"worst_violation", cert.worst_violation},
          {"entries", std::move(entries)},
          {"symmetrized", std::move(sym)}};
}

Json codebook_to_json(const Codebook& cb) {
  Json words = Json::array();
  for (const auto& w : cb.words) words.push_back(sequence_to_json(w));
  return {{"n", cb.n}, {"k", cb.k}, {"type", cb.type.counts()}, {"words", std::move(words)},
          {"certificate", certificate_to_json(cb.certificate)}};
}

Codebook codebook_from_json(const Json& doc) {
  try {
    Codebook cb;
    cb.n = doc.at("n").get<int>();
    cb.k = doc.at("k").get<int>();
    cb.type = TypeVector(doc.at("type").get<std::vector<int>>());
    for (const auto& w : doc.at("words")) cb.words.push_back(Sequence{w.get<std::vector<int>>()});
    if (cb.type.n() != cb.n || cb.type.alphabet_size() != cb.k) {
      throw ValidationError("codebook: type does not match n and k");
    }
    cb.certificate = verify_packing(cb);
    return cb;
  } catch (const Json::exception& e) {
    throw ValidationError(fmt::format("codebook: {}", e.what()));
  }
}

Json decoder_to_json(const UniversalDecoder& dec, bool embed_matrices) {
  Json words = Json::array();
  for (const auto& w : dec.codebook.words) words.push_back(sequence_to_json(w));
  Json doc = {{"n", dec.codebook.n},
              {"d", dec.d},
              {"k", dec.codebook.k},
              {"type", dec.codebook.type.counts()},
              {"words", std::move(words)},
              {"C", dec.threshold},
              {"fingerprint", fmt::format("{:016x}", fingerprint(dec.projections))}};
  if (embed_matrices) {
    Json ps = Json::array();
    for (const auto& p : dec.projections) ps.push_back(matrix_to_json(p.matrix()));
    doc["projections"] = std::move(ps);
  }
  return doc;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError(fmt::format("cannot write {}", path.string()));
  out << text;
}

}  // namespace ucq
