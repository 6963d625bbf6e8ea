#include "nnls/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nnls/errors.hpp"

namespace nnls {

namespace {

[[noreturn]] void bad(const std::string& what)
{
    throw Error(ErrorKind::Config, what);
}

std::vector<std::string> split(const std::string& line, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

double cell(const std::string& s)
{
    double v = 0.0;
    const char* b = s.data();
    while (*b == ' ') ++b;
    const auto r = std::from_chars(b, s.data() + s.size(), v);
    if (r.ec != std::errc()) bad("bad number '" + s + "'");
    return v;
}

nlohmann::json cjson(cplx z)
{
    return {{"re", z.real()}, {"im", z.imag()}};
}

}  // namespace

std::string format_number(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) bad("cannot write '" + path.string() + "'");
    out << text;
    if (!out) bad("write failed for '" + path.string() + "'");
}

std::string read_text(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) bad("cannot read '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

CsvTable& CsvTable::row()
{
    rows_.emplace_back();
    return *this;
}

CsvTable& CsvTable::add(double v)
{
    rows_.back().push_back(format_number(v));
    return *this;
}

CsvTable& CsvTable::add(cplx v)
{
    add(v.real());
    return add(v.imag());
}

CsvTable& CsvTable::add(const std::string& v)
{
    rows_.back().push_back(v);
    return *this;
}

CsvTable& CsvTable::add_empty(int count)
{
    for (int i = 0; i < count; ++i) rows_.back().emplace_back();
    return *this;
}

std::string CsvTable::str() const
{
    std::string s;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) s += (i ? "," : "") + cells[i];
        s += '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return s;
}

std::string snapshot_csv(const FieldSnapshot& snap)
{
    std::string s = "# t = " + format_number(snap.t) + "\n# L = " + format_number(snap.L) +
                    "\n# dx = " + format_number(snap.dx) + "\nx,re,im\n";
    for (std::size_t i = 0; i < snap.q.size(); ++i)
        s += format_number(snap.x(i)) + "," + format_number(snap.q[i].real()) + "," + format_number(snap.q[i].imag()) + "\n";
    return s;
}

FieldSnapshot parse_snapshot_csv(const std::string& text)
{
    FieldSnapshot snap;
    std::istringstream in(text);
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = line.substr(2, line.find(' ', 2) - 2);
            const double v = cell(line.substr(eq + 2));
            if (key == "t") snap.t = v;
            else if (key == "L") snap.L = v;
            else if (key == "dx") snap.dx = v;
            continue;
        }
        if (!header) {
            header = true;
            continue;
        }
        const auto c = split(line, ',');
        if (c.size() != 3) bad("snapshot rows need x,re,im");
        snap.q.emplace_back(cell(c[1]), cell(c[2]));
    }
    if (!(snap.dx > 0.0) || snap.q.empty()) bad("snapshot CSV lacks a header or data");
    return snap;
}

InitialProfile read_profile_csv(const std::filesystem::path& path, const BackgroundParams& bg)
{
    std::istringstream in(read_text(path));
    std::string line;
    std::vector<double> xs;
    std::vector<cplx> qs;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto c = split(line, ',');
        if (c.size() < 2) bad("profile rows need x,re[,im]");
        double x = 0.0;
        const char* b = c[0].data();
        while (*b == ' ') ++b;
        const auto r = std::from_chars(b, c[0].data() + c[0].size(), x);
        if (r.ec != std::errc() && xs.empty()) continue;  // header row
        xs.push_back(cell(c[0]));
        qs.emplace_back(cell(c[1]), c.size() > 2 ? cell(c[2]) : 0.0);
    }
    if (xs.size() < 4) bad("profile '" + path.string() + "' needs at least four samples");
    const double dx = (xs.back() - xs.front()) / double(xs.size() - 1);
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (std::abs(xs[i] - (xs.front() + double(i) * dx)) > 1e-9 * std::max(1.0, std::abs(xs[i])))
            bad("profile '" + path.string() + "' is not on a uniform grid");
    return InitialProfile::from_samples(bg, xs.front(), dx, std::move(qs));
}

std::string zeros_json(const ZeroSet& zeros, const OmegaSet& omegas, const AssumptionReport& report)
{
    using nlohmann::json;
    json j;
    j["n"] = zeros.n();
    j["p"] = json::array();
    for (cplx p : zeros.p) j["p"].push_back(cjson(p));
    j["eta"] = json::array();
    for (cplx e : zeros.eta) j["eta"].push_back(cjson(e));
    j["omegas"] = omegas.omegas;
    j["assumptions"] = {{"zeros_ok", report.zeros_ok},
                        {"a2_nonvanishing", report.a2_nonvanishing},
                        {"interleaving_ok", report.interleaving_ok},
                        {"winding_bands_ok", report.winding_bands_ok},
                        {"all_ok", report.all_ok()},
                        {"diagnostics", report.diagnostics}};
    return j.dump(2) + "\n";
}

void parse_zeros_json(const std::string& text, ZeroSet& zeros, OmegaSet& omegas)
{
    try {
        const auto j = nlohmann::json::parse(text);
        zeros = ZeroSet{};
        for (const auto& p : j.at("p")) zeros.p.emplace_back(p.at("re").get<double>(), p.at("im").get<double>());
        for (const auto& e : j.at("eta")) zeros.eta.emplace_back(e.at("re").get<double>(), e.at("im").get<double>());
        omegas.omegas = j.at("omegas").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        bad(std::string("bad zeros JSON: ") + e.what());
    }
}

}  // namespace nnls
