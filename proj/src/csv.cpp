#include "rlcore/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace rlcore {

std::string format_double(double v) {
    // shortest representation that parses back to the same double
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::string curve_row_to_csv(const CurveRow& row) {
    std::ostringstream os;
    os << row.env_step << ',' << format_double(row.eval_return_mean) << ','
       << format_double(row.eval_return_sd) << ',' << format_double(row.critic_loss) << ','
       << format_double(row.actor_loss) << ',' << format_double(row.alpha) << ','
       << format_double(row.wall_ms);
    return os.str();
}

void write_curve_csv(const std::string& path, const LearningCurve& curve) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open for writing: " + path);
    os << kCurveCsvHeader << '\n';
    for (const CurveRow& row : curve.rows) os << curve_row_to_csv(row) << '\n';
    if (!os) throw IoError("write failed: " + path);
}

std::vector<std::vector<std::string>> read_csv_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open: " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::string field;
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            const char c = line[i];
            if (quoted) {
                if (c == '"') {
                    if (i + 1 < line.size() && line[i + 1] == '"') {
                        field += '"';
                        ++i;
                    } else {
                        quoted = false;
                    }
                } else {
                    field += c;
                }
            } else if (c == '"') {
                quoted = true;
            } else if (c == ',') {
                fields.push_back(std::move(field));
                field.clear();
            } else {
                field += c;
            }
        }
        fields.push_back(std::move(field));
        rows.push_back(std::move(fields));
    }
    return rows;
}

LearningCurve read_curve_csv(const std::string& path) {
    const auto rows = read_csv_file(path);
    if (rows.empty()) throw IoError("curve csv empty: " + path);
    std::string header;
    for (std::size_t i = 0; i < rows[0].size(); ++i) {
        if (i) header += ',';
        header += rows[0][i];
    }
    if (header != kCurveCsvHeader)
        throw IoError("curve csv has unexpected header: " + header);
    LearningCurve curve;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& f = rows[r];
        if (f.size() != 7) throw IoError("curve csv row has wrong field count");
        CurveRow row;
        row.env_step = std::stol(f[0]);
        row.eval_return_mean = std::stod(f[1]);
        row.eval_return_sd = std::stod(f[2]);
        row.critic_loss = std::stod(f[3]);
        row.actor_loss = std::stod(f[4]);
        row.alpha = std::stod(f[5]);
        row.wall_ms = std::stod(f[6]);
        curve.rows.push_back(row);
    }
    return curve;
}

} // namespace rlcore
