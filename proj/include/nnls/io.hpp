#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nnls/asymptotics.hpp"
#include "nnls/pde.hpp"
#include "nnls/profile.hpp"
#include "nnls/spectrum.hpp"

namespace nnls {

// Shortest round-trip decimal form; identical input gives identical text.
std::string format_number(double v);

// Writes atomically enough for our purposes: truncates and writes, throws Config on failure.
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

// Simple CSV table with a header row and numeric or text cells.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);
    CsvTable& row();
    CsvTable& add(double v);
    CsvTable& add(cplx v);  // two cells: re, im
    CsvTable& add(const std::string& v);
    CsvTable& add_empty(int count = 1);
    std::string str() const;
    std::size_t rows() const { return rows_.size(); }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

// Header lines "# t = ..", "# L = ..", "# dx = .." followed by x,re,im rows.
std::string snapshot_csv(const FieldSnapshot& snap);
FieldSnapshot parse_snapshot_csv(const std::string& text);

// Sampled profile from columns x,re,im on a uniform grid.
InitialProfile read_profile_csv(const std::filesystem::path& path, const BackgroundParams& bg);

// {n, p:[{re,im}], eta:[{re,im}], omegas:[...]} plus the assumption report.
std::string zeros_json(const ZeroSet& zeros, const OmegaSet& omegas, const AssumptionReport& report);
void parse_zeros_json(const std::string& text, ZeroSet& zeros, OmegaSet& omegas);

}  // namespace nnls
