#include "polariton/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace polariton {

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("failed writing " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_header(std::ostream& out, const std::vector<std::string>& header) {
    for (const auto& line : header) out << "# " << line << '\n';
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const std::vector<std::string>& header) {
    write_header(out, header);
    out << "t,re_c,im_c,norm\n";
    for (std::size_t n = 0; n < traj.c_t.size(); ++n) {
        out << format_number(traj.grid.time(n)) << ',' << format_number(traj.c_t[n].real()) << ','
            << format_number(traj.c_t[n].imag()) << ',' << format_number(traj.norm_t[n]) << '\n';
    }
}

void write_spectrum_csv(std::ostream& out, const Spectrum& s, const std::vector<std::string>& header) {
    write_header(out, header);
    out << "omega,intensity\n";
    for (std::size_t i = 0; i < s.omega.size(); ++i) {
        out << format_number(s.omega[i]) << ',' << format_number(s.intensity[i]) << '\n';
    }
}

void write_expansion_csv(std::ostream& out, const ExpansionResult& r, const std::vector<std::string>& header) {
    write_header(out, header);
    out << "t,re_c1,im_c1,re_corr,im_corr,re_scaled,im_scaled\n";
    for (std::size_t n = 0; n < r.c1_t.size(); ++n) {
        out << format_number(r.grid.time(n)) << ',' << format_number(r.c1_t[n].real()) << ','
            << format_number(r.c1_t[n].imag()) << ',' << format_number(r.c_corr_t[n].real()) << ','
            << format_number(r.c_corr_t[n].imag()) << ',' << format_number(r.scaled_corr_t[n].real()) << ','
            << format_number(r.scaled_corr_t[n].imag()) << '\n';
    }
}

std::string rate_json(const RateResult& r, const std::vector<std::string>& header) {
    nlohmann::ordered_json j;
    j["header"] = header;
    j["dark_index"] = r.dark_index;
    j["E_D"] = r.dark_energy;
    j["photon_weight"] = r.photon_weight;
    j["Gamma_total"] = r.gamma_total;
    j["direct_leakage"] = r.direct_leakage;
    auto channels = nlohmann::ordered_json::array();
    for (const auto& c : r.channels) {
        nlohmann::ordered_json cj;
        cj["k"] = c.k;
        cj["final_index"] = c.final_index;
        cj["final_energy"] = c.final_energy;
        cj["final_width"] = c.final_width;
        cj["rate"] = c.contribution;
        channels.push_back(std::move(cj));
    }
    j["channels"] = std::move(channels);
    if (!r.diagnostic.empty()) j["diagnostic"] = r.diagnostic;
    return j.dump(2) + "\n";
}

} // namespace polariton
