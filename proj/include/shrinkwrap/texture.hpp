#pragma once

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace shrinkwrap {

/// Binary PPM (P6) checkerboard: `cells` x `cells` squares over a 512x512
/// canvas, pixel (0,0) white. `cells` must be even and >= 2.
inline void write_checkerboard_ppm(const std::string& path, int cells = 16,
                                   int size = 512) {
    if (cells < 2 || cells % 2 != 0)
        throw std::invalid_argument("cells must be even and >= 2");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << "P6\n" << size << " " << size << "\n255\n";
    std::vector<unsigned char> row(static_cast<std::size_t>(size) * 3);
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            const int cx = x * cells / size;
            const int cy = y * cells / size;
            const unsigned char v = (cx + cy) % 2 == 0 ? 255 : 0;
            row[3 * x] = row[3 * x + 1] = row[3 * x + 2] = v;
        }
        os.write(reinterpret_cast<const char*>(row.data()),
                 static_cast<std::streamsize>(row.size()));
    }
    if (!os) throw std::runtime_error("write failed: " + path);
}

/// Minimal MTL referencing the checkerboard image, for OBJ viewers.
inline void write_checker_mtl(const std::string& path,
                              const std::string& texture_file) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << "newmtl checker\nKd 1 1 1\nmap_Kd " << texture_file << "\n";
    if (!os) throw std::runtime_error("write failed: " + path);
}

}  // namespace shrinkwrap
