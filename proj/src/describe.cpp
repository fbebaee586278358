#include "featkit/desc/describe.hpp"

#include "featkit/desc/orientation.hpp"

namespace featkit {

namespace {

bool recoverable(const Error& e) {
    return e.code() == ErrorCode::out_of_bounds ||
           e.code() == ErrorCode::degenerate_descriptor;
}

} // namespace

DescriptorSet describe(const GrayImage& img, const std::vector<Keypoint>& kps,
                       DescriptorKind kind, const DescribeParams& params) {
    DescriptorSet set;
    set.kind = kind;
    set.dim = descriptor_dim(kind);

    if (kind == DescriptorKind::sift || kind == DescriptorKind::surf) {
        const OrientationParams& op = kind == DescriptorKind::sift
                                          ? params.sift.orientation
                                          : params.surf.orientation;
        IntegralImage ii;
        if (kind == DescriptorKind::surf)
            ii = IntegralImage(img);
        for (const Keypoint& kp : kps) {
            for (const Keypoint& oriented : assign_orientation(img, kp, op)) {
                try {
                    std::vector<float> row =
                        kind == DescriptorKind::sift
                            ? sift_descriptor(img, oriented, params.sift)
                            : surf_descriptor(img, ii, oriented, params.surf);
                    set.fdata.insert(set.fdata.end(), row.begin(), row.end());
                    set.keypoints.push_back(oriented);
                } catch (const Error& e) {
                    if (!recoverable(e))
                        throw;
                }
            }
        }
    } else {
        for (const Keypoint& kp : kps) {
            try {
                BinaryResult r = kind == DescriptorKind::brisk
                                     ? brisk_descriptor(img, kp, params.brisk)
                                     : freak_descriptor(img, kp, params.freak);
                set.bdata.insert(set.bdata.end(), r.bits.begin(), r.bits.end());
                Keypoint oriented = kp;
                oriented.orientation = r.alpha;
                set.keypoints.push_back(oriented);
            } catch (const Error& e) {
                if (!recoverable(e))
                    throw;
            }
        }
    }
    return set;
}

} // namespace featkit
