#ifndef HERALD_FIGURES_HPP
#define HERALD_FIGURES_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace herald {

/// Numeric table with a fixed column schema.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

struct FigureOptions {
  /// Grid points per axis for the fig6 contour grid.
  int grid_size = 200;
};

/// Known figure ids: fig4, fig5, fig6, fig8, fig9, fig10.
const std::vector<std::string>& figure_ids();

/// Curve or grid data for a figure. Throws std::invalid_argument for an
/// unknown id.
Table figure_table(const std::string& id, const FigureOptions& options = {});

/// Comma-separated, header first, LF line endings, 17 significant digits.
void write_csv(std::ostream& out, const Table& table);

/// Formats one value with 17 significant digits.
std::string format_number(double value);

}  // namespace herald

#endif  // HERALD_FIGURES_HPP
