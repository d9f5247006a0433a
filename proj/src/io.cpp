#include "rrgen/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace rrgen::io {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ifstream open_input(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw FileMissing(path);
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open " + path.string() + " for writing");
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_double(const std::string& s, const std::filesystem::path& path) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("malformed number '" + s + "' in " + path.string());
    }
}

nlohmann::json read_json(const std::filesystem::path& path) {
    auto in = open_input(path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("malformed JSON in " + path.string() + ": " + e.what());
    }
}

nlohmann::json matrix_to_json(const Matrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const nlohmann::json& j, const std::string& what) {
    if (!j.is_array() || j.empty() || !j[0].is_array())
        throw ParseError(what + ": expected an array of rows");
    const Index rows = static_cast<Index>(j.size());
    const Index cols = static_cast<Index>(j[0].size());
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        if (static_cast<Index>(j[i].size()) != cols) throw ParseError(what + ": ragged rows");
        for (Index c = 0; c < cols; ++c) m(i, c) = j[i][c].get<double>();
    }
    return m;
}

} // namespace

IoRecord read_io_csv(const std::filesystem::path& path) {
    auto in = open_input(path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty CSV: " + path.string());
    const auto header = split_csv_line(line);

    Index m = 0;
    Index l = 0;
    for (const auto& h : header) {
        if (h.rfind("u_", 0) == 0 && l == 0) ++m;
        else if (h.rfind("y_", 0) == 0) ++l;
        else throw ParseError("unexpected CSV header field '" + h + "' in " + path.string() +
                              " (expect u_1..u_m then y_1..y_l)");
    }
    if (m == 0 || l == 0) throw ParseError("CSV header must name u_* and y_* columns: " + path.string());

    std::vector<std::vector<double>> samples;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (static_cast<Index>(fields.size()) != m + l)
            throw ParseError("row with " + std::to_string(fields.size()) + " fields, expected " +
                             std::to_string(m + l) + " in " + path.string());
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields) row.push_back(parse_double(f, path));
        samples.push_back(std::move(row));
    }
    if (samples.empty()) throw ParseError("CSV has a header but no samples: " + path.string());

    IoRecord rec;
    rec.u.resize(m, static_cast<Index>(samples.size()));
    rec.y.resize(l, static_cast<Index>(samples.size()));
    for (Index k = 0; k < static_cast<Index>(samples.size()); ++k) {
        for (Index i = 0; i < m; ++i) rec.u(i, k) = samples[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
        for (Index i = 0; i < l; ++i) rec.y(i, k) = samples[static_cast<std::size_t>(k)][static_cast<std::size_t>(m + i)];
    }
    return rec;
}

void write_io_csv(const std::filesystem::path& path, const IoRecord& rec) {
    auto out = open_output(path);
    for (Index i = 0; i < rec.n_in(); ++i) out << (i ? "," : "") << "u_" << (i + 1);
    for (Index i = 0; i < rec.n_out(); ++i) out << ",y_" << (i + 1);
    out << "\n";
    for (Index k = 0; k < rec.samples(); ++k) {
        for (Index i = 0; i < rec.n_in(); ++i) out << (i ? "," : "") << fmt_double(rec.u(i, k));
        for (Index i = 0; i < rec.n_out(); ++i) out << "," << fmt_double(rec.y(i, k));
        out << "\n";
    }
}

void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRow>& rows) {
    auto out = open_output(path);
    out << "k,tau,gamma,alarm\n";
    for (const auto& row : rows)
        out << row.k << "," << fmt_double(row.tau) << "," << fmt_double(row.gamma) << ","
            << (row.alarm ? 1 : 0) << "\n";
}

void write_baseline_trace_csv(const std::filesystem::path& path, const BaselineTrace& trace) {
    auto out = open_output(path);
    out << "k,y,r,tau,gamma,alarm\n";
    for (const auto& row : trace.rows)
        out << row.k << "," << fmt_double(row.y) << "," << fmt_double(row.r) << ","
            << fmt_double(row.tau) << "," << fmt_double(row.gamma) << "," << (row.alarm ? 1 : 0) << "\n";
}

void write_fx_trace_csv(const std::filesystem::path& path, const FxRunResult& run) {
    auto out = open_output(path);
    out << "k,tau_fx,gamma,alarm,saturated\n";
    for (const auto& row : run.rows)
        out << row.k << "," << fmt_double(row.tau) << "," << fmt_double(run.gamma) << ","
            << (row.alarm ? 1 : 0) << "," << (row.saturated ? 1 : 0) << "\n";
}

void write_far_sweep_csv(const std::filesystem::path& path, const SweepResult& result) {
    auto out = open_output(path);
    out << "L,snr_db,trials,windows,alarms,far\n";
    for (const auto& cell : result.cells)
        out << cell.window << "," << fmt_double(cell.snr_db) << "," << cell.trials << ","
            << cell.windows << "," << cell.alarms << "," << fmt_double(cell.far) << "\n";
}

void write_snr_table_csv(const std::filesystem::path& path, const std::vector<SnrErrorRow>& rows) {
    auto out = open_output(path);
    out << "snr_db,mean_abs_err,std_err\n";
    for (const auto& row : rows)
        out << fmt_double(row.snr_db) << "," << fmt_double(row.mean_abs_err) << ","
            << fmt_double(row.std_err) << "\n";
}

void write_ranges_csv(const std::filesystem::path& path, const RangeMap& ranges, const FormatMap& formats) {
    auto out = open_output(path);
    out << "name,sim_min,sim_max,whole,count,proposed_signed,proposed_word,proposed_frac\n";
    for (const auto& [name, range] : ranges) {
        const FxFormat& fmt = formats.at(name);
        out << name << "," << fmt_double(range.sim_min) << "," << fmt_double(range.sim_max) << ","
            << (range.whole ? 1 : 0) << "," << range.count << "," << (fmt.is_signed ? 1 : 0) << ","
            << fmt.word << "," << fmt.frac << "\n";
    }
}

void write_markov_json(const std::filesystem::path& path, const MarkovEstimate& est, const Matrix& sigma_e_hat) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["past"] = est.past;
    j["n_in"] = est.n_in;
    j["n_out"] = est.n_out;
    j["coeffs"] = matrix_to_json(est.coeffs);
    j["sigma_e_hat"] = matrix_to_json(sigma_e_hat);
    open_output(path) << j.dump(2) << "\n";
}

MarkovEstimate read_markov_json(const std::filesystem::path& path, Matrix* sigma_e_hat) {
    const auto j = read_json(path);
    MarkovEstimate est;
    try {
        est.past = j.at("past").get<Index>();
        est.n_in = j.at("n_in").get<Index>();
        est.n_out = j.at("n_out").get<Index>();
        est.coeffs = matrix_from_json(j.at("coeffs"), "coeffs");
        if (sigma_e_hat && j.contains("sigma_e_hat"))
            *sigma_e_hat = matrix_from_json(j.at("sigma_e_hat"), "sigma_e_hat");
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("malformed markov artifact " + path.string() + ": " + e.what());
    }
    if (est.coeffs.cols() != est.cols_expected() || est.coeffs.rows() != est.n_out)
        throw ParseError("markov artifact dimensions are inconsistent: " + path.string());
    return est;
}

void write_gram_json(const std::filesystem::path& path, const GramInverse& gram) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["g"] = matrix_to_json(gram.g);
    open_output(path) << j.dump(2) << "\n";
}

GramInverse read_gram_json(const std::filesystem::path& path) {
    const auto j = read_json(path);
    try {
        return GramInverse{matrix_from_json(j.at("g"), "g")};
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("malformed gram artifact " + path.string() + ": " + e.what());
    }
}

void write_formats_json(const std::filesystem::path& path, const FormatMap& formats) {
    nlohmann::json j;
    j["schema_version"] = 1;
    nlohmann::json map = nlohmann::json::object();
    for (const auto& [name, fmt] : formats)
        map[name] = {{"signed", fmt.is_signed}, {"word", fmt.word}, {"frac", fmt.frac}};
    j["formats"] = std::move(map);
    open_output(path) << j.dump(2) << "\n";
}

FormatMap read_formats_json(const std::filesystem::path& path, StaticBoundsMap* static_bounds) {
    const auto j = read_json(path);
    const nlohmann::json* map = &j;
    if (j.contains("formats")) map = &j.at("formats");

    FormatMap formats;
    try {
        for (const auto& [name, spec] : map->items()) {
            if (name == "schema_version") continue;
            FxFormat fmt;
            const auto& s = spec.at("signed");
            fmt.is_signed = s.is_boolean() ? s.get<bool>() : (s.get<int>() != 0);
            fmt.word = spec.at("word").get<int>();
            fmt.frac = spec.at("frac").get<int>();
            fmt.validate();
            formats[name] = fmt;
            if (static_bounds) {
                StaticBounds bounds;
                if (spec.contains("static_min")) bounds.min = spec.at("static_min").get<double>();
                if (spec.contains("static_max")) bounds.max = spec.at("static_max").get<double>();
                if (bounds.min || bounds.max) (*static_bounds)[name] = bounds;
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("malformed formats file " + path.string() + ": " + e.what());
    }
    return formats;
}

void write_op_count_json(const std::filesystem::path& path, const OpCountReport& report) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["fixed_point"] = {{"multipliers", report.fx_multipliers},
                        {"adders_subtractors", report.fx_adders_subtractors},
                        {"dividers", report.fx_dividers}};
    j["floating_point"] = {{"multipliers", report.float_multipliers},
                           {"adders_subtractors", report.float_adders_subtractors},
                           {"dividers", report.float_dividers}};
    j["quantizations"] = report.quantizations;
    open_output(path) << j.dump(2) << "\n";
}

} // namespace rrgen::io
