#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace rrgen::cli {

/// Exit codes shared by every subcommand.
inline constexpr int kOk = 0;
inline constexpr int kError = 1;        // validation, numeric or parse failure
inline constexpr int kFileMissing = 2;  // a referenced input file does not exist

struct CommonOptions {
    std::filesystem::path config;
    std::filesystem::path out_dir = ".";
    std::optional<std::uint64_t> seed;  // flag override; config may also carry one
};

int cmd_identify(const CommonOptions& opts);
int cmd_detect(const CommonOptions& opts);
int cmd_sweep(const CommonOptions& opts);
int cmd_fx(const CommonOptions& opts);

} // namespace rrgen::cli
