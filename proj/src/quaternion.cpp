#include "spinwright/quaternion.hpp"

namespace spinwright {

std::array<std::array<double, 4>, 4> to_real_block(const Quaternion& q) {
    // Columns are q*1, q*i, q*j, q*k expressed in the basis (1, i, j, k).
    return {{{q.w, -q.x, -q.y, -q.z},
             {q.x, q.w, -q.z, q.y},
             {q.y, q.z, q.w, -q.x},
             {q.z, -q.y, q.x, q.w}}};
}

}  // namespace spinwright
