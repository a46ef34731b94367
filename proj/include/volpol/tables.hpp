#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "volpol/activity.hpp"
#include "volpol/ingest.hpp"
#include "volpol/netmetrics.hpp"
#include "volpol/polarization.hpp"
#include "volpol/syncnet.hpp"
#include "volpol/volatility.hpp"

// Plot-ready tab-separated tables. Each starts with a header line; numbers
// use the shortest text that reads back to the same double.
namespace volpol::tables {

std::string number(double v);

void writeCcdf(std::ostream& out, const std::vector<CcdfPoint>& points);
void writeOpsVsDays(std::ostream& out, const std::vector<OpsVsDays>& rows);
void writeHillSweep(std::ostream& out, const std::vector<TailFit>& fits);
void writeNodes(std::ostream& out, const SyncNetwork& net);
void writeEdges(std::ostream& out, const SyncNetwork& net);
void writePartition(std::ostream& out, const SyncNetwork& net, const Partition& partition);
void writeScores(std::ostream& out, const std::vector<PolarizationScore>& scores);
void writeExclusions(std::ostream& out, const std::vector<Exclusion>& exclusions);
void writeHistogram(std::ostream& out, const Histogram& hist);
void writeVolatility(std::ostream& out, const TradingCalendar& calendar, const VolatilitySeries& nu,
                     const MesoSeries& ops);
void writeRejects(std::ostream& out, const std::vector<Reject>& rejects);
void writeOffCalendar(std::ostream& out, const std::vector<TradeRecord>& trades);

}  // namespace volpol::tables
