#include "oscp/dataio.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "oscp/rng.hpp"

namespace oscp {

using nlohmann::json;

FileFormat format_from_path(const std::string& path) {
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) {
        return FileFormat::Csv;
    }
    return FileFormat::Json;
}

void validate_dataset(const DatasetFile& dataset) {
    if (dataset.d < 1 || dataset.T < 1 || dataset.N < 1) {
        throw ShapeError("dataset dimensions must be positive (d=" + std::to_string(dataset.d) +
                         ", T=" + std::to_string(dataset.T) + ", N=" + std::to_string(dataset.N) + ")");
    }
    if (static_cast<int>(dataset.series.size()) != dataset.N) {
        throw ShapeError("declared N=" + std::to_string(dataset.N) + " but found " +
                         std::to_string(dataset.series.size()) + " series");
    }
    for (int i = 0; i < dataset.N; ++i) {
        const ResidualSeries& s = dataset.series[static_cast<std::size_t>(i)];
        if (s.dims() != dataset.d || s.steps() != dataset.T) {
            throw ShapeError("series " + std::to_string(i) + " has shape " + std::to_string(s.dims()) +
                             "x" + std::to_string(s.steps()) + ", expected " + std::to_string(dataset.d) +
                             "x" + std::to_string(dataset.T));
        }
        if (!s.values.allFinite()) {
            throw NonFiniteValue("series " + std::to_string(i) + " contains a non-finite value");
        }
    }
}

DatasetFile parse_dataset_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("dataset JSON: ") + e.what());
    }
    DatasetFile out;
    try {
        out.d = doc.at("d").get<int>();
        out.T = doc.at("T").get<int>();
        out.N = doc.at("N").get<int>();
        const json& series = doc.at("series");
        if (!series.is_array()) throw ShapeError("'series' must be an array");
        out.series.reserve(series.size());
        for (std::size_t i = 0; i < series.size(); ++i) {
            const json& steps = series[i];
            if (!steps.is_array() || static_cast<int>(steps.size()) != out.T) {
                throw ShapeError("series " + std::to_string(i) + " has " + std::to_string(steps.size()) +
                                 " steps, expected T=" + std::to_string(out.T));
            }
            ResidualSeries rs;
            rs.values.resize(out.d, out.T);
            for (int t = 0; t < out.T; ++t) {
                const json& vec = steps[static_cast<std::size_t>(t)];
                if (!vec.is_array() || static_cast<int>(vec.size()) != out.d) {
                    throw ShapeError("series " + std::to_string(i) + " step " + std::to_string(t) +
                                     " has " + std::to_string(vec.size()) + " dims, expected d=" +
                                     std::to_string(out.d));
                }
                for (int k = 0; k < out.d; ++k) {
                    rs.values(k, t) = vec[static_cast<std::size_t>(k)].get<double>();
                }
            }
            out.series.push_back(std::move(rs));
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("dataset JSON: ") + e.what());
    }
    validate_dataset(out);
    return out;
}

std::string dataset_to_json(const DatasetFile& dataset) {
    json doc;
    doc["d"] = dataset.d;
    doc["T"] = dataset.T;
    doc["N"] = dataset.N;
    json series = json::array();
    for (const ResidualSeries& s : dataset.series) {
        json steps = json::array();
        for (int t = 0; t < dataset.T; ++t) {
            json vec = json::array();
            for (int k = 0; k < dataset.d; ++k) vec.push_back(s.values(k, t));
            steps.push_back(std::move(vec));
        }
        series.push_back(std::move(steps));
    }
    doc["series"] = std::move(series);
    return doc.dump(2) + "\n";
}

DatasetFile parse_dataset_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("dataset CSV: empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::vector<std::string> header;
    {
        std::istringstream hs(line);
        std::string cell;
        while (std::getline(hs, cell, ',')) header.push_back(cell);
    }
    if (header.size() < 3 || header[0] != "series_id" || header[1] != "t") {
        throw ParseError("dataset CSV: header must start with series_id,t,dim_0,...");
    }
    const int d = static_cast<int>(header.size()) - 2;
    for (int k = 0; k < d; ++k) {
        if (header[static_cast<std::size_t>(k + 2)] != "dim_" + std::to_string(k)) {
            throw ParseError("dataset CSV: expected column dim_" + std::to_string(k));
        }
    }

    std::vector<std::vector<std::vector<double>>> rows; // [series][t][dim]
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (static_cast<int>(cells.size()) != d + 2) {
            throw ParseError("dataset CSV line " + std::to_string(line_no) + ": expected " +
                             std::to_string(d + 2) + " cells, found " + std::to_string(cells.size()));
        }
        long series_id = 0, t = 0;
        try {
            series_id = std::stol(cells[0]);
            t = std::stol(cells[1]);
        } catch (const std::exception&) {
            throw ParseError("dataset CSV line " + std::to_string(line_no) + ": bad index");
        }
        if (series_id != static_cast<long>(rows.size()) &&
            series_id != static_cast<long>(rows.size()) - 1) {
            throw ParseError("dataset CSV line " + std::to_string(line_no) +
                             ": rows must be sorted by (series_id, t)");
        }
        if (series_id == static_cast<long>(rows.size())) rows.emplace_back();
        auto& steps = rows.back();
        if (t != static_cast<long>(steps.size())) {
            throw ParseError("dataset CSV line " + std::to_string(line_no) +
                             ": rows must be sorted by (series_id, t)");
        }
        std::vector<double> vec(static_cast<std::size_t>(d));
        for (int k = 0; k < d; ++k) {
            try {
                vec[static_cast<std::size_t>(k)] = std::stod(cells[static_cast<std::size_t>(k + 2)]);
            } catch (const std::exception&) {
                throw ParseError("dataset CSV line " + std::to_string(line_no) + ": bad number '" +
                                 cells[static_cast<std::size_t>(k + 2)] + "'");
            }
        }
        steps.push_back(std::move(vec));
    }
    if (rows.empty()) throw ParseError("dataset CSV: no data rows");

    DatasetFile out;
    out.d = d;
    out.N = static_cast<int>(rows.size());
    out.T = static_cast<int>(rows.front().size());
    out.series.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (static_cast<int>(rows[i].size()) != out.T) {
            throw ShapeError("dataset CSV: series " + std::to_string(i) + " has " +
                             std::to_string(rows[i].size()) + " steps, expected " + std::to_string(out.T));
        }
        ResidualSeries rs;
        rs.values.resize(out.d, out.T);
        for (int t = 0; t < out.T; ++t) {
            for (int k = 0; k < out.d; ++k) {
                rs.values(k, t) = rows[i][static_cast<std::size_t>(t)][static_cast<std::size_t>(k)];
            }
        }
        out.series.push_back(std::move(rs));
    }
    validate_dataset(out);
    return out;
}

std::string dataset_to_csv(const DatasetFile& dataset) {
    std::ostringstream out;
    out << "series_id,t";
    for (int k = 0; k < dataset.d; ++k) out << ",dim_" << k;
    out << "\n";
    char buf[64];
    for (int i = 0; i < dataset.N; ++i) {
        for (int t = 0; t < dataset.T; ++t) {
            out << i << ',' << t;
            for (int k = 0; k < dataset.d; ++k) {
                std::snprintf(buf, sizeof(buf), "%.17g", dataset.series[static_cast<std::size_t>(i)].values(k, t));
                out << ',' << buf;
            }
            out << "\n";
        }
    }
    return out.str();
}

DatasetFile load_dataset(const std::string& path, FileFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return format == FileFormat::Json ? parse_dataset_json(buffer.str())
                                      : parse_dataset_csv(buffer.str());
}

DatasetFile load_dataset(const std::string& path) {
    return load_dataset(path, format_from_path(path));
}

void save_dataset(const DatasetFile& dataset, const std::string& path, FileFormat format) {
    validate_dataset(dataset);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out << (format == FileFormat::Json ? dataset_to_json(dataset) : dataset_to_csv(dataset));
}

void save_dataset(const DatasetFile& dataset, const std::string& path) {
    save_dataset(dataset, path, format_from_path(path));
}

DatasetFile generate_synthetic(const SynthConfig& config) {
    if (config.d < 1 || config.T < 1 || config.N < 1) {
        throw InvalidArgument("synthetic config dimensions must be positive");
    }
    if (!(config.sigma >= 0.0)) {
        throw InvalidArgument("sigma must be nonnegative");
    }
    if (!(config.ar_coefficient > -1.0 && config.ar_coefficient < 1.0)) {
        throw InvalidArgument("ar_coefficient must lie in (-1, 1)");
    }
    if (!(config.heteroscedastic_ramp >= 0.0)) {
        throw InvalidArgument("heteroscedastic_ramp must be nonnegative");
    }

    Rng rng(static_cast<std::uint64_t>(config.seed));
    std::vector<double> sigma_t(static_cast<std::size_t>(config.T));
    for (int t = 0; t < config.T; ++t) {
        sigma_t[static_cast<std::size_t>(t)] =
            config.sigma * std::pow(1.0 + config.heteroscedastic_ramp, t);
    }

    DatasetFile out;
    out.d = config.d;
    out.T = config.T;
    out.N = config.N;
    out.series.reserve(static_cast<std::size_t>(config.N));
    for (int i = 0; i < config.N; ++i) {
        ResidualSeries rs;
        rs.values.resize(config.d, config.T);
        for (int k = 0; k < config.d; ++k) {
            double prev = 0.0;
            for (int t = 0; t < config.T; ++t) {
                const double noise = sigma_t[static_cast<std::size_t>(t)] * rng.next_gaussian();
                double x = noise;
                if (config.model == SynthModel::Ar1) {
                    x += config.ar_coefficient * prev;
                }
                rs.values(k, t) = x;
                prev = x;
            }
        }
        out.series.push_back(std::move(rs));
    }
    return out;
}

} // namespace oscp
