#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "cstar/module/vector.hpp"

namespace cstar::io {

/// In-memory dataset: real input feature vectors and module-vector outputs
/// over one algebra.  RKHM regression uses output width 1; nets use width
/// d_L.
struct Dataset {
    DescriptorPtr descriptor;
    int input_dim = 0;
    std::vector<Eigen::VectorXd> inputs;
    std::vector<ModuleVector> outputs;

    int size() const { return static_cast<int>(inputs.size()); }
    int output_width() const { return outputs.empty() ? 0 : outputs.front().dim(); }

    void validate() const {
        if (inputs.empty()) throw IoError("dataset has no samples");
        if (inputs.size() != outputs.size())
            throw IoError("dataset inputs/outputs length mismatch");
        for (const auto& x : inputs)
            if (x.size() != input_dim) throw IoError("dataset input width mismatch");
        for (const auto& y : outputs) {
            require_same_descriptor(descriptor, y.descriptor(), "dataset");
            if (y.dim() != outputs.front().dim())
                throw IoError("dataset output width mismatch");
        }
    }

    /// Single-entry outputs as plain elements (the RKHM regression shape).
    std::vector<AlgebraElement> scalar_outputs() const {
        std::vector<AlgebraElement> out;
        out.reserve(outputs.size());
        for (const auto& y : outputs) {
            if (y.dim() != 1) throw IoError("expected a single output entry per sample");
            out.push_back(y[0]);
        }
        return out;
    }
};

inline Json to_json(const Dataset& data) {
    Json j;
    j["descriptor"] = cstar::to_json(*data.descriptor);
    j["input_dim"] = data.input_dim;
    Json samples = Json::array();
    for (size_t t = 0; t < data.inputs.size(); ++t) {
        Json s;
        s["x"] = std::vector<double>(data.inputs[t].data(),
                                     data.inputs[t].data() + data.inputs[t].size());
        Json y = Json::array();
        for (int k = 0; k < data.outputs[t].dim(); ++k)
            y.push_back(cstar::to_json(data.outputs[t][k]));
        s["y"] = y;
        samples.push_back(std::move(s));
    }
    j["samples"] = samples;
    return j;
}

inline Dataset dataset_from_json(const Json& j) {
    Dataset d;
    d.descriptor = descriptor_from_json(j.at("descriptor"));
    d.input_dim = j.at("input_dim").get<int>();
    if (!j.contains("samples") || j.at("samples").empty())
        throw IoError("dataset has no samples");
    for (const auto& s : j.at("samples")) {
        auto xv = s.at("x").get<std::vector<double>>();
        d.inputs.push_back(
            Eigen::Map<const Eigen::VectorXd>(xv.data(), static_cast<long>(xv.size())));
        std::vector<AlgebraElement> entries;
        for (const auto& e : s.at("y")) entries.push_back(element_from_json(d.descriptor, e));
        d.outputs.emplace_back(std::move(entries));
    }
    d.validate();
    return d;
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss(line);
    while (std::getline(ss, cur, ',')) {
        // trim
        const auto b = cur.find_first_not_of(" \t\r");
        const auto e = cur.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? "" : cur.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

struct CsvColumn {
    bool is_input = false;
    int input_index = -1;
    int entry = -1;  // output entry j
    int coord = 0;   // coordinate within the entry
    bool imag = false;
};

/// Header grammar: inputs "x<i>"; outputs "y<j>", "y<j>[c]", with optional
/// ".re"/".im" suffix.  Plain columns are real parts.
inline CsvColumn parse_csv_header(const std::string& name, long line_no) {
    CsvColumn col;
    std::string body = name;
    if (body.size() > 3 && body.substr(body.size() - 3) == ".re") {
        body = body.substr(0, body.size() - 3);
    } else if (body.size() > 3 && body.substr(body.size() - 3) == ".im") {
        col.imag = true;
        body = body.substr(0, body.size() - 3);
    }
    try {
        if (!body.empty() && body[0] == 'x') {
            col.is_input = true;
            col.input_index = std::stoi(body.substr(1));
            return col;
        }
        if (!body.empty() && body[0] == 'y') {
            const auto bracket = body.find('[');
            if (bracket == std::string::npos) {
                col.entry = std::stoi(body.substr(1));
                col.coord = 0;
                return col;
            }
            const auto close = body.find(']');
            if (close == std::string::npos || close < bracket)
                throw std::invalid_argument("bad bracket");
            col.entry = std::stoi(body.substr(1, bracket - 1));
            col.coord = std::stoi(body.substr(bracket + 1, close - bracket - 1));
            return col;
        }
    } catch (const std::exception&) {
        // fall through to the error below
    }
    throw IoError("unrecognized CSV column \"" + name + "\"", line_no);
}

}  // namespace detail

/// CSV datasets: rows are samples, columns are input features then flattened
/// output coordinates.  Without coordinate brackets the outputs are scalars;
/// with them the descriptor defaults to a grid function over the coordinate
/// count (pass desc_hint for any other kind of the same coordinate size).
inline Dataset load_dataset_csv(const std::string& path, DescriptorPtr desc_hint = nullptr) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open \"" + path + "\"");
    std::string line;
    long line_no = 0;

    // header
    do {
        if (!std::getline(in, line)) throw IoError("dataset has no samples");
        ++line_no;
    } while (line.find_first_not_of(" \t\r") == std::string::npos);

    const auto names = detail::split_csv_line(line);
    std::vector<detail::CsvColumn> cols;
    int n_inputs = 0, n_entries = 0, n_coords = 0;
    bool bracketed = false;
    for (const auto& n : names) {
        auto c = detail::parse_csv_header(n, line_no);
        if (c.is_input) {
            n_inputs = std::max(n_inputs, c.input_index + 1);
        } else {
            n_entries = std::max(n_entries, c.entry + 1);
            n_coords = std::max(n_coords, c.coord + 1);
            if (n.find('[') != std::string::npos) bracketed = true;
        }
        cols.push_back(c);
    }
    if (n_inputs == 0) throw IoError("CSV header has no input columns", line_no);
    if (n_entries == 0) throw IoError("CSV header has no output columns", line_no);

    Dataset d;
    d.input_dim = n_inputs;
    if (desc_hint) {
        if (desc_hint->coord_size() != n_coords)
            throw IoError("descriptor hint does not match CSV coordinate count");
        d.descriptor = desc_hint;
    } else {
        d.descriptor = bracketed ? AlgebraDescriptor::grid_function(n_coords)
                                 : AlgebraDescriptor::scalar();
    }

    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != cols.size())
            throw IoError("row has " + std::to_string(fields.size()) + " fields, expected " +
                              std::to_string(cols.size()),
                          line_no);
        Eigen::VectorXd x = Eigen::VectorXd::Zero(n_inputs);
        std::vector<Eigen::VectorXcd> y(static_cast<size_t>(n_entries),
                                        Eigen::VectorXcd::Zero(d.descriptor->coord_size()));
        for (size_t c = 0; c < cols.size(); ++c) {
            double value = 0.0;
            try {
                size_t used = 0;
                value = std::stod(fields[c], &used);
                if (used != fields[c].size()) throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                throw IoError("cannot parse \"" + fields[c] + "\" as a number", line_no);
            }
            const auto& col = cols[c];
            if (col.is_input) {
                x[col.input_index] = value;
            } else {
                auto& cell = y[static_cast<size_t>(col.entry)][col.coord];
                cell = col.imag ? Complex(cell.real(), value) : Complex(value, cell.imag());
            }
        }
        d.inputs.push_back(std::move(x));
        std::vector<AlgebraElement> entries;
        for (auto& v : y) entries.emplace_back(d.descriptor, std::move(v));
        d.outputs.emplace_back(std::move(entries));
    }
    d.validate();
    return d;
}

/// CSV export covers the kinds whose coordinates are self-describing
/// (scalar and grid-function); other kinds round-trip through JSON.
inline void save_dataset_csv(const Dataset& data, const std::string& path) {
    data.validate();
    const auto kind = data.descriptor->kind();
    if (kind != AlgebraKind::Scalar && kind != AlgebraKind::GridFunction)
        throw IoError("CSV export supports scalar and grid-function outputs; use JSON");
    bool complex_values = false;
    for (const auto& yv : data.outputs)
        for (int k = 0; k < yv.dim(); ++k)
            if (yv[k].coords().imag().cwiseAbs().maxCoeff() > 0.0) complex_values = true;

    std::ofstream out(path);
    if (!out) throw IoError("cannot write \"" + path + "\"");
    const int coords = data.descriptor->coord_size();
    for (int i = 0; i < data.input_dim; ++i) out << (i ? "," : "") << "x" << i;
    for (int j = 0; j < data.output_width(); ++j)
        for (int c = 0; c < coords; ++c) {
            std::string base = "y" + std::to_string(j);
            if (kind != AlgebraKind::Scalar) base += "[" + std::to_string(c) + "]";
            if (complex_values)
                out << "," << base << ".re," << base << ".im";
            else
                out << "," << base;
        }
    out << "\n";
    out.precision(17);
    for (int t = 0; t < data.size(); ++t) {
        for (int i = 0; i < data.input_dim; ++i) out << (i ? "," : "") << data.inputs[t][i];
        for (int j = 0; j < data.output_width(); ++j)
            for (int c = 0; c < coords; ++c) {
                const Complex v = data.outputs[static_cast<size_t>(t)][j].coords()[c];
                out << "," << v.real();
                if (complex_values) out << "," << v.imag();
            }
        out << "\n";
    }
}

inline void save_dataset_json(const Dataset& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write \"" + path + "\"");
    out << to_json(data).dump(2) << "\n";
}

inline Dataset load_dataset_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open \"" + path + "\"");
    Json j;
    try {
        in >> j;
    } catch (const Json::exception& e) {
        throw IoError(std::string("invalid JSON in \"") + path + "\": " + e.what());
    }
    return dataset_from_json(j);
}

/// Dispatch on the file extension: .csv or .json.
inline Dataset load_dataset(const std::string& path, DescriptorPtr desc_hint = nullptr) {
    const auto dot = path.find_last_of('.');
    const std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    if (ext == "csv") return load_dataset_csv(path, std::move(desc_hint));
    if (ext == "json") return load_dataset_json(path);
    throw IoError("unknown dataset format \"" + ext + "\" (expected csv or json)");
}

}  // namespace cstar::io
