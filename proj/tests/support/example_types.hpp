#pragma once

#include <string>

// Hospital (HS/HC) and satellite (SC) protocols used throughout the tests.
namespace sessub::testing {

inline const std::string kHospitalServer = "rec X.&{nd;+{ko;X, ok;X}, pr;+{ko;X, ok;X}}";
inline const std::string kHospitalClient = "rec X.+{nd;&{ko;X, ok;X}, pr;&{ko;X, ok;X}}";
// Client that only sends nd and tolerates an extra dk answer.
inline const std::string kHospitalClient2 = "rec X.+{nd;&{ko;X, ok;X, dk;X}}";
// Same, with ko misspelt as ko1.
inline const std::string kHospitalClient2Bad = "rec X.+{nd;&{ko1;X, ok;X, dk;X}}";
// Client that sends pr after an ok without waiting for the next answer.
inline const std::string kHospitalClient3 = "rec X.+{nd;&{ko;X, ok;+{pr;X}}}";

inline const std::string kSatelliteControl = "rec X.&{tm;X, over;rec Y.+{tc;Y, done;end}}";
inline const std::string kSatelliteControl2 = "rec X.+{tc;X, done;rec Y.&{tm;Y, over;end}}";

// Two states, both on a send-only cycle.
inline const std::string kSendLoop = "+{a;rec X.+{b;X}}";

}  // namespace sessub::testing
