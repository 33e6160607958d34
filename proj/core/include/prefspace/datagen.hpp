#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "prefspace/geometry.hpp"

namespace prefspace {

struct BoundingBox {
    double xmin = -2.0;
    double xmax = 2.0;
    double ymin = -2.0;
    double ymax = 2.0;

    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
};

/// Synthetic scene: `structures` parametric structures carrying
/// `points_per_structure` genuine points with perpendicular Gaussian noise,
/// plus uniform anomalies at the requested ratio |A| / |X|.
struct SyntheticSpec {
    ModelFamily kind = ModelFamily::kLines;
    std::size_t structures = 2;
    std::size_t points_per_structure = 125;
    double sigma = 0.05;
    double anomaly_ratio = 0.5;
    BoundingBox bbox;
    std::uint64_t seed = 0;
};

struct Scene {
    Dataset data;
    std::vector<StructureModel> structures;
};

/// Deterministic in all SyntheticSpec fields. The default two-line scene is an X of the
/// box diagonals; circle scenes place overlapping, non-concentric circles
/// along the horizontal midline. Anomalies are drawn uniformly inside the
/// bounding box of the generated genuine points.
Scene generate(const SyntheticSpec& spec);

/// CSV with header `x,y,label`; coordinates at 17 significant digits, label
/// 0 = genuine, 1 = anomaly.
void save_csv(const Dataset& data, const std::filesystem::path& path);
Dataset load_csv(const std::filesystem::path& path);

/// JSON sidecar with the generating structures, for noise estimation.
void save_structures(std::span<const StructureModel> structures,
                     const std::filesystem::path& path);
std::vector<StructureModel> load_structures(const std::filesystem::path& path);

}  // namespace prefspace
