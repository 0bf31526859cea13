#pragma once

#include <string>

#include "uncvol/series.hpp"

namespace uncvol {

/// Loads one monthly series from a UTF-8 CSV with a header row. Dates must be
/// YYYY-MM, ascending, with no gaps or duplicates; violations raise LoadError
/// naming the row.
Series load_csv(const std::string& path, const std::string& date_column,
                const std::string& value_column, const std::string& series_name = "");

}  // namespace uncvol
