#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "qmlab/numerics.hpp"
#include "qmlab/tables.hpp"

namespace qm::cli {

enum class Format { Json, Csv, Text };

struct CliConfig {
    Format format = Format::Text;
    numerics::ToleranceConfig tol;
    std::string out_path;  ///< empty: the output stream passed to run()
};

/// Throws InputError for anything but json, csv or text.
Format format_from_name(std::string_view name);

/// Entry point behind the qmlab executable. `args` excludes the program
/// name. Returns 0 on success, 2 for bad arguments or input files, 3 for
/// numerical failures.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Header `Q,p,value,kind`, LF line endings, shortest round-trip numbers.
std::string rows_to_csv(const std::vector<tables::TableRow>& rows);
std::vector<tables::TableRow> rows_from_csv(std::istream& in);

std::string rows_to_json(const std::vector<tables::TableRow>& rows);
std::vector<tables::TableRow> rows_from_json(std::istream& in);

/// One line per row with 10 significant digits.
std::string rows_to_text(const std::vector<tables::TableRow>& rows);

}  // namespace qm::cli
