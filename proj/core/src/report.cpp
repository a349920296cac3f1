#include "rt/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace rt {

double Check::residual() const { return std::abs(value - reference); }

Check make_check(std::string name, double value, double reference, double tolerance, std::string anchor,
                 std::string note) {
    Check c{std::move(name), value, reference, tolerance, false, std::move(anchor), std::move(note)};
    c.pass = std::isfinite(value) && c.residual() <= tolerance;
    return c;
}

Check make_result(std::string name, double value, std::string anchor, std::string note) {
    Check c{std::move(name), value, value, 0.0, true, std::move(anchor), std::move(note)};
    return c;
}

bool Report::all_pass() const {
    for (const Check& c : checks)
        if (!c.pass) return false;
    return true;
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string hex64(std::uint64_t v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

void write_text(const Report& r, std::ostream& out) {
    out << "scenario: " << r.scenario << "\n";
    out << "subcommand: " << r.subcommand << "\n";
    out << "hash: " << hex64(r.hash) << "\n";
    out << "seed: " << r.seed << "\n";
    std::size_t passed = 0;
    for (const Check& c : r.checks) {
        passed += c.pass;
        out << (c.pass ? "PASS " : "FAIL ") << c.name << "\n";
        out << "  value     " << format_number(c.value) << "\n";
        if (c.tolerance > 0 || !c.pass) {
            out << "  reference " << format_number(c.reference) << "\n";
            out << "  residual  " << format_number(c.residual()) << " (tolerance " << format_number(c.tolerance) << ")\n";
        }
        out << "  identity  " << c.anchor << "\n";
        if (!c.note.empty()) out << "  note      " << c.note << "\n";
    }
    out << passed << "/" << r.checks.size() << " checks passed\n";
}

void write_csv(const Report& r, std::ostream& out) {
    out << "check,value,reference,residual,tolerance,pass,anchor,note\n";
    for (const Check& c : r.checks)
        out << csv_field(c.name) << ',' << format_number(c.value) << ',' << format_number(c.reference) << ','
            << format_number(c.residual()) << ',' << format_number(c.tolerance) << ',' << (c.pass ? "true" : "false")
            << ',' << csv_field(c.anchor) << ',' << csv_field(c.note) << '\n';
}

void emit_report(const Report& r, const std::string& text_path, const std::string& csv_path) {
    std::ofstream t(text_path, std::ios::binary), c(csv_path, std::ios::binary);
    if (!t || !c) throw std::runtime_error("cannot write report files under " + text_path);
    write_text(r, t);
    write_csv(r, c);
    if (!t || !c) throw std::runtime_error("failed while writing report files");
}

}  // namespace rt
