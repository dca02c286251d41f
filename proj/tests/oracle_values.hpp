#pragma once

// Reference values from tests/oracles/compute_oracles.py (mpmath, 40 digits).
// (4,1,4,1) denotes (p,q,r,b); kPair* are the roots at lambda = 2*lambda_0,
// kT*AtE<k> the roots at lambda = 10^k.

namespace oracle {

inline constexpr double kL3 = 1.3110287771460599052;
inline constexpr double kL1p5 = 4.5292347900863014886;
inline constexpr double kL10 = 0.32908688476174025605;
inline constexpr double kMu3 = 1.8540746773013719184;
inline constexpr double kMu5 = 1.1019643024816143317;
inline constexpr double kNorm3Half = 23.368166356967333791;
inline constexpr double kNorm41 = 6.3413697861085416879;
inline constexpr double kNorm51p5 = 3.7744580999703367668;
inline constexpr double kNorm104 = 1.7892912090578934361;
inline constexpr double kTailMoment3Half = 2.3271851424365387506;
inline constexpr double kU3AtHalf = 2.8808129794990116523;
inline constexpr double kX3At2Mu = 0.61617208413017999081;
inline constexpr double kLambda0 = 2417.8281985287168306;
inline constexpr double kPairT1 = 0.85427038323942631831;
inline constexpr double kPairT2 = 14.53077586048474567;
inline constexpr double kT1AtE4 = 0.50981952120473567671;
inline constexpr double kT2AtE4 = 35.04035631322970581;
inline constexpr double kT1AtE6 = 0.069343552337259691443;
inline constexpr double kT2AtE6 = 3917.4853162387045162;
inline constexpr double kT1AtE8 = 0.013916151045689445383;
inline constexpr double kT2AtE8 = 392144.68479411230494;
inline constexpr double kT1AtE10 = 0.0029550058579826755861;
inline constexpr double kT2AtE10 = 39214864.480941127606;

} // namespace oracle
