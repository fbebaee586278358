#pragma once

#include <string>
#include <vector>

namespace featkit {

// One (reference, test) image pair drawn from an ALOI-style directory tree:
// root/<object>/<object>_<code>.png (or .pgm). Photometric pairs share the
// camera pose and carry an identity homography; pose-changing pairs carry
// none and are scored by match counts alone.
struct AloiPair {
    std::string family;    // aloi_illum_dir | aloi_illum_color | aloi_view | aloi_stereo
    std::string object_id;
    std::string condition; // test-side condition code, e.g. l3c2, i110, r40, left
    std::string ref_path;
    std::string test_path;
    bool identity_h = false;
};

// Families:
//   aloi_illum_dir   l<1..8>c<1..3>, reference l8c<camera> (frontal light,
//                    same camera), 24 pairs per object, identity H
//   aloi_illum_color i110..i250 (12 temperatures), reference i250, identity H
//   aloi_view        r<angle>, reference r0, one pair per angle found, no H
//   aloi_stereo      c / l / r cameras: (c,l), (c,r) and the wide (l,r), no H
//
// object_ids empty means every subdirectory of root. Missing files are
// skipped with a diagnostic on stderr. A root/manifest.json file (array of
// {path, object_id, family, condition_code, role}) overrides the layout
// scan entirely. Raises dataset_not_found if root is missing or no pair
// survives.
std::vector<AloiPair> load_aloi_subset(const std::string& root, const std::string& family,
                                       const std::vector<std::string>& object_ids);

} // namespace featkit
