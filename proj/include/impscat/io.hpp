#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "impscat/shape_opt.hpp"
#include "impscat/surface.hpp"

namespace impscat::io {

enum class Format { csv, json };

Format parse_format(const std::string& s);

// 17 significant digits, '.' decimal separator, no locale dependence.
std::string format_double(double v);

// Rectangular output table with a fixed column order. Cells are preformatted
// strings; comments become leading '# ' lines in CSV and a "comments" field
// in JSON.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> comments;
};

void write_csv(const Table& table, std::ostream& os);
void write_json(const Table& table, std::ostream& os);
void write_table(const Table& table, const std::string& path, Format format);

// Flat key=value config file; '#' starts a comment, whitespace is trimmed.
std::map<std::string, std::string> load_config(const std::string& path);

// Two-column CSV (rho, g) describing the visible cap of a radial body;
// rho strictly increasing from 0.
ConvexSurface load_radial_surface_csv(const std::string& path);

// Two-column CSV (rho, u): row i holds the right edge of cell i and the cell
// slope; the left edge of the first cell is rho = 0.
RadialProfile load_profile_csv(const std::string& path);
void save_profile_csv(const RadialProfile& profile, const std::string& path);

}  // namespace impscat::io
