#pragma once

#include <string>
#include <vector>

#include "oscp/types.hpp"

namespace oscp {

/// On-disk dataset: N series of shape d x T.
struct DatasetFile {
    int d = 0;
    int T = 0;
    int N = 0;
    std::vector<ResidualSeries> series;
};

enum class FileFormat { Json, Csv };

FileFormat format_from_path(const std::string& path);

DatasetFile load_dataset(const std::string& path, FileFormat format);
DatasetFile load_dataset(const std::string& path); // format from extension
void save_dataset(const DatasetFile& dataset, const std::string& path, FileFormat format);
void save_dataset(const DatasetFile& dataset, const std::string& path);

/// Parse/serialize without touching the filesystem (used by tests).
DatasetFile parse_dataset_json(const std::string& text);
std::string dataset_to_json(const DatasetFile& dataset);
DatasetFile parse_dataset_csv(const std::string& text);
std::string dataset_to_csv(const DatasetFile& dataset);

enum class SynthModel { IidGaussian, Ar1 };

/// Seeded synthetic residual generator. Series are drawn independently,
/// hence exchangeable. iid_gaussian: entry ~ N(0, sigma_t^2) with
/// sigma_t = sigma * (1 + heteroscedastic_ramp)^t. ar1: per dimension,
/// x_t = ar_coefficient * x_{t-1} + sigma_t * z_t (temporal correlation
/// within a series).
struct SynthConfig {
    int d = 1;
    int T = 1;
    int N = 1;
    SynthModel model = SynthModel::IidGaussian;
    double sigma = 1.0;
    double ar_coefficient = 0.0;
    double heteroscedastic_ramp = 0.0;
    long long seed = 0;
};

DatasetFile generate_synthetic(const SynthConfig& config);

void validate_dataset(const DatasetFile& dataset);

} // namespace oscp
