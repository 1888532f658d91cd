#pragma once
// Numeric CSV ingestion and emission. Input tables are rectangular with an
// optional single header row (detected by a non-numeric first row); output
// floats carry 17 significant digits so a write/read round trip is exact.

#include <string>

#include "rconf/geometry.hpp"
#include "rconf/grid.hpp"

namespace rconf {

/// Parses CSV text into a Dataset, preserving row order (multiset
/// semantics). Ragged rows, non-numeric or non-finite cells, and inputs
/// with no data rows raise errors carrying the row/column location.
Dataset parse_csv_text(const std::string& text);

/// parse_csv_text over the contents of a file.
Dataset ingest_csv(const std::string& path);

/// Shortest-exact decimal form: 17 significant digits.
std::string format_double(double v);

std::string dataset_to_csv(const Dataset& data);
void write_dataset_csv(const Dataset& data, const std::string& path);

/// Mask rows are "coord_1,...,coord_d,member" with member in {0,1}.
std::string mask_to_csv(const GridMask& mask);
void write_mask_csv(const GridMask& mask, const std::string& path);

/// Writes arbitrary text, creating or truncating the file.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace rconf
