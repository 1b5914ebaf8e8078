#include "impscat/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "impscat/errors.hpp"

namespace impscat::io {

Format parse_format(const std::string& s) {
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    throw ParseError("unknown output format '" + s + "' (expected csv or json)");
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

}  // namespace

void write_csv(const Table& table, std::ostream& os) {
    for (const std::string& c : table.comments) os << "# " << c << "\n";
    for (size_t i = 0; i < table.columns.size(); ++i) {
        if (i) os << ",";
        os << csv_escape(table.columns[i]);
    }
    os << "\n";
    for (const auto& row : table.rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) os << ",";
            os << csv_escape(row[i]);
        }
        os << "\n";
    }
}

void write_json(const Table& table, std::ostream& os) {
    nlohmann::ordered_json doc;
    if (!table.comments.empty()) doc["comments"] = table.comments;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json obj;
        for (size_t i = 0; i < table.columns.size() && i < row.size(); ++i)
            obj[table.columns[i]] = row[i];
        rows.push_back(obj);
    }
    doc["rows"] = rows;
    os << doc.dump(2) << "\n";
}

void write_table(const Table& table, const std::string& path, Format format) {
    std::ofstream os(path);
    if (!os) throw ParseError("cannot open output file '" + path + "'");
    if (format == Format::csv)
        write_csv(table, os);
    else
        write_json(table, os);
}

std::map<std::string, std::string> load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open config file '" + path + "'");
    std::map<std::string, std::string> out;
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        size_t b = s.find_first_not_of(" \t\r");
        size_t e = s.find_last_not_of(" \t\r");
        if (b == std::string::npos) return std::string();
        return s.substr(b, e - b + 1);
    };
    while (std::getline(is, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string t = trim(line);
        if (t.empty()) continue;
        size_t eq = t.find('=');
        if (eq == std::string::npos) {
            std::ostringstream os;
            os << path << ":" << lineno << ": expected key = value";
            throw ParseError(os.str());
        }
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty()) {
            std::ostringstream os;
            os << path << ":" << lineno << ": empty key";
            throw ParseError(os.str());
        }
        out[key] = value;
    }
    return out;
}

namespace {

std::vector<std::pair<double, double>> load_two_column_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open CSV file '" + path + "'");
    std::vector<std::pair<double, double>> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string t = line;
        if (t.find_first_not_of(" \t\r,") == std::string::npos) continue;
        for (char& c : t)
            if (c == ',' || c == ';' || c == '\t') c = ' ';
        std::istringstream ls(t);
        double a, b;
        if (!(ls >> a >> b)) {
            // tolerate a single header line
            if (lineno == 1) continue;
            std::ostringstream os;
            os << path << ":" << lineno << ": expected two numeric columns";
            throw ParseError(os.str());
        }
        rows.emplace_back(a, b);
    }
    if (rows.size() < 2) throw ParseError(path + ": need at least two data rows");
    return rows;
}

}  // namespace

ConvexSurface load_radial_surface_csv(const std::string& path) {
    auto rows = load_two_column_csv(path);
    std::vector<double> rho, g;
    rho.reserve(rows.size());
    g.reserve(rows.size());
    for (auto& [a, b] : rows) {
        rho.push_back(a);
        g.push_back(b);
    }
    if (rho.front() != 0.0) throw ParseError(path + ": first rho must be 0");
    for (size_t i = 1; i < rho.size(); ++i)
        if (!(rho[i] > rho[i - 1])) throw ParseError(path + ": rho must strictly increase");
    return ConvexSurface::radial_profile(rho, g, "radial-profile(" + path + ")");
}

RadialProfile load_profile_csv(const std::string& path) {
    auto rows = load_two_column_csv(path);
    RadialProfile p;
    p.rho.push_back(0.0);
    for (auto& [r, u] : rows) {
        if (!(r > p.rho.back()))
            throw ParseError(path + ": rho must strictly increase from 0");
        p.rho.push_back(r);
        p.u.push_back(u);
    }
    return p;
}

void save_profile_csv(const RadialProfile& profile, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw ParseError("cannot open output file '" + path + "'");
    os << "rho,u\n";
    for (int i = 0; i < profile.cells(); ++i)
        os << format_double(profile.rho[i + 1]) << "," << format_double(profile.u[i]) << "\n";
}

}  // namespace impscat::io
