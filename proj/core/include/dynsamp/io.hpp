#pragma once
//
// Text and JSON persistence.
//
// T3 v1 tensor files:
//     T3 1 <m> <p> <n> <real|complex>
// followed by m*p*n lines in (k, j, i) lexicographic order (i fastest), each
// "re" or "re im" printed with %.17e.
//

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "dynsamp/dynsys.hpp"
#include "dynsamp/reconstruct.hpp"
#include "dynsamp/sampling.hpp"
#include "dynsamp/tensor3.hpp"

namespace dynsamp::io {

std::string format_t3(const Tensor3& t);
// `source` names the input in ParseError messages.
Tensor3 parse_t3(const std::string& text, const std::string& source = "<t3>");

void write_t3(const std::filesystem::path& path, const Tensor3& t);
Tensor3 read_t3(const std::filesystem::path& path);

// Mask as real 0/1 T3 plus a sidecar <stem>.json with the provenance.
std::string format_mask_sidecar(const SampleMask& mask);
void write_mask(const std::filesystem::path& t3_path, const SampleMask& mask);
SampleMask read_mask(const std::filesystem::path& t3_path);

// Directory with mask.t3 (+ mask.json), obs_<t>.t3 and meta.json.
void write_sample_data(const std::filesystem::path& dir, const SampleData& data);
SampleData read_sample_data(const std::filesystem::path& dir);

// {rel_error?, residuals[], kappa[], K, ranks[], failed_columns[],
//  rank_deficient_columns[], wall_ms?}; column indices are 1-based.
std::string format_report(const ReconstructionReport& report, bool include_timing);

// Writes through a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

} // namespace dynsamp::io
