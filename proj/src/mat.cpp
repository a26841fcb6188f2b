#include "hecke3/mat.hpp"

namespace hecke3 {

namespace {

std::vector<std::vector<Rat>> parse_rows(const std::string& s) {
    std::vector<std::vector<Rat>> rows;
    std::string row;
    std::stringstream ss(s);
    while (std::getline(ss, row, ';')) {
        std::vector<Rat> vals;
        std::string cell;
        std::stringstream rs(row);
        while (std::getline(rs, cell, ',')) vals.push_back(rat_from_string(cell));
        rows.push_back(std::move(vals));
    }
    return rows;
}

}  // namespace

Mat3q mat3_from_string(const std::string& s) {
    auto rows = parse_rows(s);
    if (rows.size() != 3 || rows[0].size() != 3 || rows[1].size() != 3 || rows[2].size() != 3)
        throw std::invalid_argument("matrix literal must have 3 rows of 3 entries");
    Mat3q m;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) m(i, j) = rows[i][j];
    return m;
}

Mat2q mat2_from_string(const std::string& s) {
    auto rows = parse_rows(s);
    if (rows.size() != 2 || rows[0].size() != 2 || rows[1].size() != 2)
        throw std::invalid_argument("matrix literal must have 2 rows of 2 entries");
    Mat2q m;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) m(i, j) = rows[i][j];
    return m;
}

std::string mat3_to_string(const Mat3q& m) {
    std::string out;
    for (std::size_t i = 0; i < 3; ++i) {
        if (i) out += ";";
        for (std::size_t j = 0; j < 3; ++j) {
            if (j) out += ",";
            out += rat_to_string(m(i, j));
        }
    }
    return out;
}

}  // namespace hecke3
