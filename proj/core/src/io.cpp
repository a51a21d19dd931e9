#include "dynsamp/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>
#include <system_error>

#include <unistd.h>

#include <json.hpp>

#include "dynsamp/error.hpp"

namespace dynsamp::io {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void append_double(std::string& out, double v)
{
    char buf[40];
    const int len = std::snprintf(buf, sizeof buf, "%.17e", v);
    out.append(buf, static_cast<std::size_t>(len));
}

std::vector<std::string_view> split_ws(std::string_view line)
{
    std::vector<std::string_view> tokens;
    std::size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r'))
            ++pos;
        const std::size_t start = pos;
        while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t' && line[pos] != '\r')
            ++pos;
        if (pos > start)
            tokens.push_back(line.substr(start, pos - start));
    }
    return tokens;
}

template <class T>
bool parse_number(std::string_view tok, T& value)
{
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    return ec == std::errc{} && ptr == tok.data() + tok.size();
}

double parse_value(std::string_view tok, const std::string& source, std::size_t line)
{
    double v = 0.0;
    if (!parse_number(tok, v) || !std::isfinite(v))
        throw ParseError(source, line, "invalid number '" + std::string(tok) + "'");
    return v;
}

std::string provenance_kind(MaskProvenance::Kind kind)
{
    switch (kind) {
    case MaskProvenance::Kind::bernoulli: return "bernoulli";
    case MaskProvenance::Kind::lattice: return "lattice";
    case MaskProvenance::Kind::explicit_set: return "explicit";
    }
    return "explicit";
}

json one_based(const std::vector<std::size_t>& idx)
{
    json arr = json::array();
    for (auto v : idx)
        arr.push_back(v + 1);
    return arr;
}

std::vector<std::size_t> zero_based(const json& arr, const std::string& source, const char* key)
{
    std::vector<std::size_t> out;
    for (const auto& v : arr) {
        if (!v.is_number_unsigned() || v.get<std::size_t>() == 0)
            throw ParseError(source, 0, std::string("'") + key + "' entries must be positive integers");
        out.push_back(v.get<std::size_t>() - 1);
    }
    return out;
}

json parse_json_file(const fs::path& path)
{
    const std::string text = read_file(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(path.string(), 0, e.what());
    }
}

} // namespace

// --- T3 ---------------------------------------------------------------------

std::string format_t3(const Tensor3& t)
{
    const Shape& s = t.shape();
    std::string out = "T3 1 " + std::to_string(s.m) + " " + std::to_string(s.p) + " " +
                      std::to_string(s.n) + (t.is_real() ? " real\n" : " complex\n");
    out.reserve(out.size() + t.size() * (t.is_real() ? 25 : 50));
    // Storage order is already (k, j, i) lexicographic.
    for (const auto& v : t.data()) {
        append_double(out, v.real());
        if (!t.is_real()) {
            out.push_back(' ');
            append_double(out, v.imag());
        }
        out.push_back('\n');
    }
    return out;
}

Tensor3 parse_t3(const std::string& text, const std::string& source)
{
    std::size_t line_no = 0;
    std::size_t pos = 0;
    auto next_line = [&](std::string_view& line) {
        if (pos >= text.size())
            return false;
        std::size_t end = text.find('\n', pos);
        if (end == std::string::npos)
            end = text.size();
        line = std::string_view(text).substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        return true;
    };

    std::string_view line;
    if (!next_line(line))
        throw ParseError(source, 1, "empty input, expected 'T3 1 <m> <p> <n> <real|complex>'");
    const auto header = split_ws(line);
    if (header.size() != 6 || header[0] != "T3")
        throw ParseError(source, 1, "malformed header, expected 'T3 1 <m> <p> <n> <real|complex>'");
    if (header[1] != "1")
        throw ParseError(source, 1, "unsupported T3 version '" + std::string(header[1]) + "'");
    Shape shape;
    if (!parse_number(header[2], shape.m) || !parse_number(header[3], shape.p) ||
        !parse_number(header[4], shape.n) || shape.m == 0 || shape.p == 0 || shape.n == 0)
        throw ParseError(source, 1, "dimensions must be positive integers");
    bool real = false;
    if (header[5] == "real")
        real = true;
    else if (header[5] != "complex")
        throw ParseError(source, 1, "field type must be 'real' or 'complex', got '" +
                                        std::string(header[5]) + "'");

    const std::size_t expected_tokens = real ? 1 : 2;
    std::vector<cplx> data(shape.size());
    for (std::size_t idx = 0; idx < data.size(); ++idx) {
        if (!next_line(line))
            throw ParseError(source, line_no + 1,
                             "unexpected end of data: expected " + std::to_string(data.size()) +
                                 " values, got " + std::to_string(idx));
        const auto tok = split_ws(line);
        if (tok.size() != expected_tokens)
            throw ParseError(source, line_no,
                             "expected " + std::to_string(expected_tokens) + " value(s), got " +
                                 std::to_string(tok.size()));
        const double re = parse_value(tok[0], source, line_no);
        const double im = real ? 0.0 : parse_value(tok[1], source, line_no);
        data[idx] = cplx(re, im);
    }
    while (next_line(line))
        if (!split_ws(line).empty())
            throw ParseError(source, line_no, "trailing data after " +
                                                  std::to_string(data.size()) + " values");

    return Tensor3(shape, std::move(data), real ? Realness::real : Realness::complex);
}

void write_t3(const fs::path& path, const Tensor3& t)
{
    write_file_atomic(path, format_t3(t));
}

Tensor3 read_t3(const fs::path& path)
{
    return parse_t3(read_file(path), path.string());
}

// --- masks --------------------------------------------------------------------

std::string format_mask_sidecar(const SampleMask& mask)
{
    const MaskProvenance& prov = mask.provenance();
    json j;
    j["type"] = provenance_kind(prov.kind);
    if (prov.kind == MaskProvenance::Kind::bernoulli) {
        j["alpha"] = prov.alpha;
        j["seed"] = prov.seed;
    }
    if (prov.kind == MaskProvenance::Kind::lattice) {
        j["rows"] = one_based(prov.rows);
        j["cols"] = one_based(prov.cols);
    }
    json ex = json::array();
    for (const auto& e : prov.exclusions)
        ex.push_back({{"mode", e.mode}, {"index", e.index + 1}});
    j["exclusions"] = ex;
    return j.dump(2) + "\n";
}

void write_mask(const fs::path& t3_path, const SampleMask& mask)
{
    write_t3(t3_path, mask.as_tensor());
    fs::path sidecar = t3_path;
    sidecar.replace_extension(".json");
    write_file_atomic(sidecar, format_mask_sidecar(mask));
}

SampleMask read_mask(const fs::path& t3_path)
{
    const Tensor3 t = read_t3(t3_path);
    if (!t.is_real())
        throw ParseError(t3_path.string(), 1, "mask must be stored as a real tensor");
    std::vector<std::uint8_t> ind(t.size());
    for (std::size_t idx = 0; idx < ind.size(); ++idx) {
        const double v = t.data()[idx].real();
        if (v != 0.0 && v != 1.0)
            throw ParseError(t3_path.string(), idx + 2, "mask entries must be 0 or 1");
        ind[idx] = v == 1.0 ? 1 : 0;
    }

    MaskProvenance prov;
    fs::path sidecar = t3_path;
    sidecar.replace_extension(".json");
    if (fs::exists(sidecar)) {
        const std::string src = sidecar.string();
        const json j = parse_json_file(sidecar);
        try {
            const std::string type = j.at("type").get<std::string>();
            if (type == "bernoulli") {
                prov.kind = MaskProvenance::Kind::bernoulli;
                prov.alpha = j.at("alpha").get<double>();
                prov.seed = j.at("seed").get<std::uint64_t>();
            } else if (type == "lattice") {
                prov.kind = MaskProvenance::Kind::lattice;
                prov.rows = zero_based(j.at("rows"), src, "rows");
                prov.cols = zero_based(j.at("cols"), src, "cols");
            } else if (type != "explicit") {
                throw ParseError(src, 0, "unknown mask type '" + type + "'");
            }
            for (const auto& e : j.value("exclusions", json::array())) {
                const auto index = e.at("index").get<std::size_t>();
                if (index == 0)
                    throw ParseError(src, 0, "exclusion index must be 1-based");
                prov.exclusions.push_back({e.at("mode").get<int>(), index - 1});
            }
        } catch (const json::exception& e) {
            throw ParseError(src, 0, e.what());
        }
    }
    return SampleMask(t.shape(), std::move(ind), std::move(prov));
}

// --- sample data --------------------------------------------------------------------

void write_sample_data(const fs::path& dir, const SampleData& data)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create directory " + dir.string() + ": " + ec.message());

    write_mask(dir / "mask.t3", data.mask());
    for (std::size_t t = 0; t < data.horizon(); ++t)
        write_t3(dir / ("obs_" + std::to_string(t) + ".t3"), data.observation(t));

    const Shape& s = data.mask().shape();
    json meta;
    meta["T"] = data.horizon();
    meta["sigma"] = data.noise_sigma();
    meta["seed"] = data.seed();
    meta["dims"] = {s.m, s.p, s.n};
    write_file_atomic(dir / "meta.json", meta.dump(2) + "\n");
}

SampleData read_sample_data(const fs::path& dir)
{
    const fs::path meta_path = dir / "meta.json";
    const json meta = parse_json_file(meta_path);
    std::size_t horizon = 0;
    double sigma = 0.0;
    std::uint64_t seed = 0;
    Shape dims;
    try {
        horizon = meta.at("T").get<std::size_t>();
        sigma = meta.at("sigma").get<double>();
        seed = meta.at("seed").get<std::uint64_t>();
        const auto& d = meta.at("dims");
        if (!d.is_array() || d.size() != 3)
            throw ParseError(meta_path.string(), 0, "'dims' must be [m, p, n]");
        dims = {d[0].get<std::size_t>(), d[1].get<std::size_t>(), d[2].get<std::size_t>()};
    } catch (const json::exception& e) {
        throw ParseError(meta_path.string(), 0, e.what());
    }
    if (horizon == 0)
        throw ParseError(meta_path.string(), 0, "'T' must be at least 1");

    SampleMask mask = read_mask(dir / "mask.t3");
    if (mask.shape() != dims)
        throw ParseError((dir / "mask.t3").string(), 1,
                         "mask shape " + to_string(mask.shape()) + " disagrees with meta dims " +
                             to_string(dims));
    std::vector<Tensor3> obs;
    obs.reserve(horizon);
    for (std::size_t t = 0; t < horizon; ++t)
        obs.push_back(read_t3(dir / ("obs_" + std::to_string(t) + ".t3")));
    return SampleData(std::move(mask), std::move(obs), sigma, seed);
}

// --- reports ---------------------------------------------------------------------------

std::string format_report(const ReconstructionReport& report, bool include_timing)
{
    auto finite_or_null = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };

    json j;
    if (report.rel_error)
        j["rel_error"] = *report.rel_error;
    json residuals = json::array(), kappa = json::array();
    for (auto r : report.residuals)
        residuals.push_back(finite_or_null(r));
    for (const auto& k : report.kappa)
        kappa.push_back(k ? json(*k) : json(nullptr));
    j["residuals"] = residuals;
    j["kappa"] = kappa;
    j["K"] = finite_or_null(report.K);
    j["ranks"] = report.ranks;
    j["failed_columns"] = one_based(report.failed_columns);
    j["rank_deficient_columns"] = one_based(report.rank_deficient_columns);
    j["realness_violation"] = report.realness_violation;
    if (include_timing)
        j["wall_ms"] = report.wall_ms;
    return j.dump(2) + "\n";
}

// --- files ---------------------------------------------------------------------------------

void write_file_atomic(const fs::path& path, const std::string& content)
{
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out)
            throw IoError("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot move " + tmp.string() + " to " + path.string());
    }
}

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad())
        throw IoError("read failed for " + path.string());
    return ss.str();
}

} // namespace dynsamp::io
