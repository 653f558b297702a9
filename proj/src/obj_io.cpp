#include "spinwright/obj_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "spinwright/errors.hpp"

namespace spinwright {

namespace {

[[noreturn]] void fail(const std::string& path, int line,
                       const std::string& what) {
    throw InputError(path + ": line " + std::to_string(line) + ": " + what);
}

// Parses one face corner token of the form "i", "i/t" or "i/t/n"; only the
// vertex index is kept.
int parse_corner(const std::string& token, const std::string& path,
                 int line) {
    const std::string head = token.substr(0, token.find('/'));
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(head, &used);
    } catch (const std::exception&) {
        fail(path, line, "cannot parse vertex index '" + token + "'");
    }
    if (used != head.size())
        fail(path, line, "cannot parse vertex index '" + token + "'");
    if (v <= 0)
        fail(path, line, "vertex index must be positive (got '" + token + "')");
    return static_cast<int>(v);
}

}  // namespace

TriMesh load_obj(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file: " + path);

    std::vector<Eigen::Vector3d> positions;
    std::vector<std::array<int, 3>> faces;
    std::vector<int> face_lines;

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ss(line);
        std::string tag;
        if (!(ss >> tag) || tag[0] == '#') continue;

        if (tag == "v") {
            double x, y, z;
            if (!(ss >> x >> y >> z))
                fail(path, lineno, "vertex record needs three coordinates");
            positions.emplace_back(x, y, z);
        } else if (tag == "f") {
            std::vector<int> corners;
            std::string token;
            while (ss >> token)
                corners.push_back(parse_corner(token, path, lineno));
            if (corners.size() != 3)
                fail(path, lineno,
                     "only triangular faces are supported (got " +
                         std::to_string(corners.size()) + " corners)");
            faces.push_back({corners[0] - 1, corners[1] - 1, corners[2] - 1});
            face_lines.push_back(lineno);
        }
        // vn / vt / o / g / s / usemtl / mtllib are ignored.
    }

    const int nv = static_cast<int>(positions.size());
    for (std::size_t k = 0; k < faces.size(); ++k)
        for (int s = 0; s < 3; ++s)
            if (faces[k][s] < 0 || faces[k][s] >= nv)
                fail(path, face_lines[k],
                     "face references vertex " +
                         std::to_string(faces[k][s] + 1) + " but only " +
                         std::to_string(nv) + " vertices are defined");

    try {
        return make_trimesh(std::move(positions), std::move(faces));
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

void save_obj(const std::string& path, const TriMesh& m) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot open file for writing: " + path);

    char buf[128];
    for (const auto& p : m.positions) {
        std::snprintf(buf, sizeof(buf), "v %.9g %.9g %.9g\n", p.x(), p.y(),
                      p.z());
        out << buf;
    }
    for (const auto& f : m.faces)
        out << "f " << f[0] + 1 << " " << f[1] + 1 << " " << f[2] + 1 << "\n";
    if (!out) throw InputError("failed while writing: " + path);
}

}  // namespace spinwright
