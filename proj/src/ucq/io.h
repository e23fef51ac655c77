#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ucq/channel.h"
#include "ucq/universal_code.h"

namespace ucq {

using Json = nlohmann::json;

/// Channel document: {"d": 2, "k": 2, "matrices": [ [[[re, im], ...], ...], ... ]}.
/// Throws ValidationError naming the offending matrix and invariant.
Channel parse_channel(const Json& doc);
Channel load_channel(const std::filesystem::path& path);
Json channel_to_json(const Channel& w);

/// Quotes a CSV field when it contains a comma, quote, CR or LF.
std::string csv_field(const std::string& s);
/// Shortest decimal text that round-trips the double.
std::string format_double(double v);

inline constexpr const char* kExperimentCsvHeader = "n,M,C,epsilon,rate_empirical,exponent_theory,seed";

/// `unit_scale` divides the rate columns (1 for nats, log 2 for bits).
void write_experiment_csv(std::ostream& out, const std::vector<ExperimentRow>& rows, double unit_scale = 1.0);
Json experiment_summary(const ExperimentResult& res, double rate, double unit_scale = 1.0);

Json sequence_to_json(const Sequence& x);
Json certificate_to_json(const PackingCertificate& cert);
Json codebook_to_json(const Codebook& cb);
Codebook codebook_from_json(const Json& doc);

/// n, d, k, type, words, C and the projection-set fingerprint; optionally
/// the projector matrices as [re, im] arrays.
Json decoder_to_json(const UniversalDecoder& dec, bool embed_matrices = false);

Json matrix_to_json(const Matrix& m);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace ucq
