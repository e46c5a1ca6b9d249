#ifndef WPCLD_FIELD_IO_HPP
#define WPCLD_FIELD_IO_HPP

/**
 * Serialization of field grids: CSV (17 significant digits, round-trip
 * exact), a little-endian binary container, and binary P6 grayscale
 * heatmaps. All formats are byte-exact functions of the field contents.
 */

#include <cstdint>
#include <string>
#include <vector>

#include "wpcld/ld.hpp"

namespace wpcld {

/// Layout of the binary field file, all little-endian:
///   magic "LDF1" | u32 version=1 | u32 n_q | u32 n_p
///   | f64 q_min, q_max, p_min, p_max, horizon | u32 channel_count=3
/// followed by n_q * n_p * 3 f64 samples, channels (ld_fwd, ld_bwd, m_diag)
/// interleaved per node, row-major with the p index outermost.
struct FieldFileHeader {
    static constexpr char magic[4] = {'L', 'D', 'F', '1'};
    static constexpr std::uint32_t version = 1;
    static constexpr std::uint32_t channel_count = 3;
    static constexpr std::size_t byte_size = 4 + 4 + 4 + 4 + 5 * 8 + 4;  // 60
};

/// Header line `q0,p0,ld_fwd,ld_bwd,m_diag`, one row per node in sample
/// order, floats rendered with 17 significant digits.
void write_csv(const FieldGrid& field, const std::string& path);

struct CsvRow {
    double q0, p0, ld_fwd, ld_bwd, m_diag;
};

/// Parse a file produced by write_csv.
std::vector<CsvRow> read_csv(const std::string& path);

void write_binary(const FieldGrid& field, const std::string& path);

/// Read a binary field file; throws FormatError on magic/version/size
/// mismatch and IoError on filesystem failure.
FieldGrid read_binary(const std::string& path);

enum class Channel { fwd_log10, bwd_log10, m };

Channel channel_from_name(const std::string& name);
const char* channel_name(Channel channel);

/**
 * Binary P6 grayscale heatmap of one channel, n_q x n_p pixels. Values map
 * linearly from [channel min, channel max] to gray 0..255 (min black, max
 * white); the fwd/bwd channels are rendered as log10(max(ld, epsilon)).
 * Image rows are ordered so p increases upward. A degenerate range yields a
 * uniform mid-gray image and a warning on stderr.
 */
void write_heatmap(const FieldGrid& field, Channel channel,
                   const std::string& path,
                   double epsilon = kDefaultClampEpsilon);

}  // namespace wpcld

#endif  // WPCLD_FIELD_IO_HPP
