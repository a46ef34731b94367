#include "volpol/tables.hpp"

#include <charconv>
#include <ostream>

namespace volpol::tables {

std::string number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void writeCcdf(std::ostream& out, const std::vector<CcdfPoint>& points) {
  out << "value\tccdf\n";
  for (const auto& p : points) out << number(p.value) << '\t' << number(p.fraction) << '\n';
}

void writeOpsVsDays(std::ostream& out, const std::vector<OpsVsDays>& rows) {
  out << "trading_days\toperations\n";
  for (const auto& r : rows) out << r.active_days << '\t' << r.total_ops << '\n';
}

void writeHillSweep(std::ostream& out, const std::vector<TailFit>& fits) {
  out << "k\talpha\tstderr\n";
  for (const auto& f : fits) out << f.k << '\t' << number(f.alpha) << '\t' << number(f.std_error) << '\n';
}

void writeNodes(std::ostream& out, const SyncNetwork& net) {
  out << "investor\ttotal_ops\tN\tT\topd\n";
  for (const auto& n : net.nodes)
    out << n.id << '\t' << n.total_ops << '\t' << n.active_days << '\t' << n.span << '\t' << number(n.opd) << '\n';
}

void writeEdges(std::ostream& out, const SyncNetwork& net) {
  out << "i\tj\trho\toverlap\tpvalue\n";
  for (const auto& e : net.edges)
    out << net.nodes[e.i].id << '\t' << net.nodes[e.j].id << '\t' << number(e.rho) << '\t' << e.overlap << '\t'
        << number(e.pvalue) << '\n';
}

void writePartition(std::ostream& out, const SyncNetwork& net, const Partition& partition) {
  out << "investor\tcommunity\n";
  for (std::size_t i = 0; i < net.nodes.size(); ++i) out << net.nodes[i].id << '\t' << partition.community[i] << '\n';
}

void writeScores(std::ostream& out, const std::vector<PolarizationScore>& scores) {
  out << "investor\trho_ov\tdays_used\n";
  for (const auto& s : scores) out << s.investor_id << '\t' << number(s.rho_ov) << '\t' << s.days_used << '\n';
}

void writeExclusions(std::ostream& out, const std::vector<Exclusion>& exclusions) {
  out << "investor\treason\tdays_used\n";
  for (const auto& e : exclusions) out << e.investor_id << '\t' << toString(e.reason) << '\t' << e.days_used << '\n';
}

void writeHistogram(std::ostream& out, const Histogram& hist) {
  out << "bin_center\tdensity\n";
  for (std::size_t b = 0; b < hist.centers.size(); ++b)
    out << number(hist.centers[b]) << '\t' << number(hist.density[b]) << '\n';
}

void writeVolatility(std::ostream& out, const TradingCalendar& calendar, const VolatilitySeries& nu,
                     const MesoSeries& ops) {
  out << "date\tnu\toperations\n";
  for (std::size_t t = 0; t < calendar.size(); ++t) {
    const auto i = static_cast<Eigen::Index>(t);
    out << calendar.days()[t].iso() << '\t' << number(nu.nu(i)) << '\t' << number(ops.ops(i)) << '\n';
  }
}

void writeRejects(std::ostream& out, const std::vector<Reject>& rejects) {
  for (const auto& r : rejects) out << formatReject(r) << '\n';
}

void writeOffCalendar(std::ostream& out, const std::vector<TradeRecord>& trades) {
  out << "investor\tdate\tticker\n";
  for (const auto& t : trades) out << t.investor_id << '\t' << t.date.iso() << '\t' << t.ticker << '\n';
}

}  // namespace volpol::tables
