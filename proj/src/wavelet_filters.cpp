// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 WaveMotion Project Contributors

#include "wavemotion/wavelet.hpp"

#include <algorithm>
#include <sstream>

namespace wavemotion {
namespace {

struct FilterTable {
    const char* name;
    std::vector<double> dec_lo;
    std::vector<double> rec_lo;
};

// Standard filter banks, stored as the two low-pass filters; the high-pass
// filters follow from the quadrature relations in make_basis. Biorthogonal
// entries are zero-padded to a common length the way the length law expects.
const std::vector<FilterTable>& tables() {
    static const std::vector<FilterTable> t = {
    {"haar",
     {0.70710678118654757, 0.70710678118654757},
     {0.70710678118654757, 0.70710678118654757}},
    {"db9",
     {3.9347320316328571e-05, -0.00025196318894269213, 0.00023038576352304608,
        0.0018476468830563174, -0.004281503682463118, -0.0047232047577516192,
        0.022361662123678652, 0.00025094711483176617, -0.067632829061329031,
        0.030725681479332526, 0.14854074933810552, -0.096840783222975221,
        -0.29327378327917492, 0.13319738582500759, 0.65728807805130163,
        0.60482312369011093, 0.24383467461258951, 0.038077947363878054},
     {0.038077947363878054, 0.24383467461258951, 0.60482312369011093,
        0.65728807805130163, 0.13319738582500759, -0.29327378327917492,
        -0.096840783222975221, 0.14854074933810552, 0.030725681479332526,
        -0.067632829061329031, 0.00025094711483176617, 0.022361662123678652,
        -0.0047232047577516192, -0.004281503682463118, 0.0018476468830563174,
        0.00023038576352304608, -0.00025196318894269213, 3.9347320316328571e-05}},
    {"sym9",
     {0.0014009155259247636, 0.00061978088899895746, -0.01327196778184811,
        -0.011528210207679728, 0.030224878858345676, 0.00058346274587960632,
        -0.054568958431392686, 0.2387609146071602, 0.71789708276458564,
        0.61733844914091118, 0.035272488035506019, -0.19155083129674819,
        -0.018233770779268011, 0.062077789302706528, 0.0088592674933720399,
        -0.010264064027582731, -0.00047315449867789085, 0.0010694900329017024},
     {0.0010694900329017024, -0.00047315449867789085, -0.010264064027582731,
        0.0088592674933720399, 0.062077789302706528, -0.018233770779268011,
        -0.19155083129674819, 0.035272488035506019, 0.61733844914091118,
        0.71789708276458564, 0.2387609146071602, -0.054568958431392686,
        0.00058346274587960632, 0.030224878858345676, -0.011528210207679728,
        -0.01327196778184811, 0.00061978088899895746, 0.0014009155259247636}},
    {"sym10",
     {0.00077015980913226062, 9.5632670706233237e-05, -0.0086412992772343447,
        -0.0014653825813581429, 0.045927239231487234, 0.011609893902638224,
        -0.15949427888854961, -0.070880535785863313, 0.47169066693833883,
        0.76951003702044041, 0.38382676106700303, -0.035536740470582029,
        -0.031990056879112161, 0.04999497207814993, 0.0057649120337329666,
        -0.020354939811842703, -0.00080435893186925377, 0.0045931735852512492,
        5.7036083618664274e-05, -0.0004593294209923745},
     {-0.0004593294209923745, 5.7036083618664274e-05, 0.0045931735852512492,
        -0.00080435893186925377, -0.020354939811842703, 0.0057649120337329666,
        0.04999497207814993, -0.031990056879112161, -0.035536740470582029,
        0.38382676106700303, 0.76951003702044041, 0.47169066693833883,
        -0.070880535785863313, -0.15949427888854961, 0.011609893902638224,
        0.045927239231487234, -0.0014653825813581429, -0.0086412992772343447,
        9.5632670706233237e-05, 0.00077015980913226062}},
    {"coif3",
     {-3.4599722013544525e-05, -7.0983210868132005e-05, 0.00046621669599771631,
        0.0011175181648228349, -0.0025745175695703966, -0.0090079742174196085,
        0.015880539753809063, 0.034555032370139467, -0.082301931427600519,
        -0.071799817162578258, 0.42848347170482681, 0.79377722735884304,
        0.40517689763192499, -0.061123385491069493, -0.065771915585250376,
        0.023452701398532182, 0.0077825913626308084, -0.0037935096820615557},
     {-0.0037935096820615557, 0.0077825913626308084, 0.023452701398532182,
        -0.065771915585250376, -0.061123385491069493, 0.40517689763192499,
        0.79377722735884304, 0.42848347170482681, -0.071799817162578258,
        -0.082301931427600519, 0.034555032370139467, 0.015880539753809063,
        -0.0090079742174196085, -0.0025745175695703966, 0.0011175181648228349,
        0.00046621669599771631, -7.0983210868132005e-05, -3.4599722013544525e-05}},
    {"coif5",
     {-9.6352844101632352e-08, -1.6289323056371574e-07, 2.0654765817080992e-06,
        3.7084709353116212e-06, -2.1297801708115557e-05, -4.127763097132266e-05,
        0.00014046929400576797, 0.00030215118252812522, -0.00063788279277051654,
        -0.0016629708637974437, 0.0024333279373214109, 0.0067642190726443473,
        -0.0091642477351253308, -0.019761760565376811, 0.032683552577449697,
        0.041289230053338413, -0.10557422934275887, -0.062035943221291939,
        0.43799160538544868, 0.77428962466030993, 0.42156618566778525,
        -0.052043142826947872, -0.091920030122378787, 0.0281680524682839,
        0.023408131649577238, -0.010131107428711109, -0.0041593701391538611,
        0.0021782866118851404, 0.00035856763776311192, -0.00021209605569624869},
     {-0.00021209605569624869, 0.00035856763776311192, 0.0021782866118851404,
        -0.0041593701391538611, -0.010131107428711109, 0.023408131649577238,
        0.0281680524682839, -0.091920030122378787, -0.052043142826947872,
        0.42156618566778525, 0.77428962466030993, 0.43799160538544868,
        -0.062035943221291939, -0.10557422934275887, 0.041289230053338413,
        0.032683552577449697, -0.019761760565376811, -0.0091642477351253308,
        0.0067642190726443473, 0.0024333279373214109, -0.0016629708637974437,
        -0.00063788279277051654, 0.00030215118252812522, 0.00014046929400576797,
        -4.127763097132266e-05, -2.1297801708115557e-05, 3.7084709353116212e-06,
        2.0654765817080992e-06, -1.6289323056371574e-07, -9.6352844101632352e-08}},
    {"bior2.8",
     {0, 0.0015105430506304422, -0.0030210861012608843,
        -0.012947511862546647, 0.028916109826354178, 0.052998481890690945,
        -0.13491307360773608, -0.16382918343409025, 0.46257144047591658,
        0.95164212189717856, 0.46257144047591658, -0.16382918343409025,
        -0.13491307360773608, 0.052998481890690945, 0.028916109826354178,
        -0.012947511862546647, -0.0030210861012608843, 0.0015105430506304422},
     {0, 0, 0,
        0, 0, 0,
        0, 0.35355339059327379, 0.70710678118654757,
        0.35355339059327379, 0, 0,
        0, 0, 0,
        0, 0, 0}},
    {"rbio2.8",
     {0, 0, 0,
        0, 0, 0,
        0, 0.35355339059327379, 0.70710678118654757,
        0.35355339059327379, 0, 0,
        0, 0, 0,
        0, 0, 0},
     {0, 0.0015105430506304422, -0.0030210861012608843,
        -0.012947511862546647, 0.028916109826354178, 0.052998481890690945,
        -0.13491307360773608, -0.16382918343409025, 0.46257144047591658,
        0.95164212189717856, 0.46257144047591658, -0.16382918343409025,
        -0.13491307360773608, 0.052998481890690945, 0.028916109826354178,
        -0.012947511862546647, -0.0030210861012608843, 0.0015105430506304422}},
    {"bior6.8",
     {0, 0.0019088317364850279, -0.001914286129080888,
        -0.01699063986760711, 0.011934565279726764, 0.049732903490937688,
        -0.077263173167211818, -0.094059203495761759, 0.42079628460983892,
        0.82592299745843867, 0.42079628460983959, -0.094059203495761912,
        -0.077263173167211499, 0.049732903490937688, 0.011934565279726764,
        -0.01699063986760711, -0.001914286129080888, 0.0019088317364850279},
     {0, 0, 0,
        0.014426282505622279, 0.014467504896774119, -0.078722001062668981,
        -0.040367979030382369, 0.41784910915032053, 0.75890772945376384,
        0.41784910915032053, -0.040367979030382369, -0.078722001062668981,
        0.014467504896774119, 0.014426282505622279, 0,
        0, 0, 0}},
    {"dmey",
     {-4.8326809724432798e-06, 1.9508972117489984e-05, -3.6599579952246735e-05,
        7.7188604410737558e-05, -4.8584805351174442e-05, 9.2257834842812171e-05,
        2.5197131210603434e-05, -0.00012425857537511786, 4.5881764489602597e-06,
        9.9888538398792579e-05, 4.4435834326570468e-05, -0.00011603203920774441,
        -0.00024026059510677935, 0.00018495211475399824, 0.00078813012513615844,
        -0.00062091752703089518, -0.0019280756737215848, 0.0019614379070710861,
        0.0039908874016911329, -0.0053574822362208408, -0.00712778908883258,
        0.012522048600081612, 0.011127524363625262, -0.02615093805361066,
        -0.015158095475377919, 0.050304012834145956, 0.019376227087760461,
        -0.099979431284658554, -0.04872053642785823, 0.42065625306494747,
        0.78291047046662365, 0.42065562930387912, -0.048720545132614451,
        -0.09997696599218861, 0.019374262182371357, 0.050319380065509109,
        -0.015164347867698021, -0.026129979686943788, 0.011123015684100637,
        0.012539964946537941, -0.0071258735100737094, -0.0053557868816297748,
        0.0039907926822993272, 0.0019956359214273823, -0.0019327212863906606,
        -0.00062160237098572409, 0.00079992528515841592, 0.00014631429145747597,
        -0.00026322780914630952, -1.0111729964212923e-05, 6.236822835166067e-05,
        -1.2894999468888679e-05, 1.0727676380888583e-05, 1.9565382270198355e-05,
        -1.7121704060850417e-05, -1.8367613065513779e-05, -2.6064459123539968e-05,
        -9.9195883262679158e-06, -6.1589330999070837e-06, -2.3528093399693969e-06,
        -9.2322051906876066e-07, -2.2869632541557979e-07},
     {-2.2869632541557979e-07, -9.2322051906876066e-07, -2.3528093399693969e-06,
        -6.1589330999070837e-06, -9.9195883262679158e-06, -2.6064459123539968e-05,
        -1.8367613065513779e-05, -1.7121704060850417e-05, 1.9565382270198355e-05,
        1.0727676380888583e-05, -1.2894999468888679e-05, 6.236822835166067e-05,
        -1.0111729964212923e-05, -0.00026322780914630952, 0.00014631429145747597,
        0.00079992528515841592, -0.00062160237098572409, -0.0019327212863906606,
        0.0019956359214273823, 0.0039907926822993272, -0.0053557868816297748,
        -0.0071258735100737094, 0.012539964946537941, 0.011123015684100637,
        -0.026129979686943788, -0.015164347867698021, 0.050319380065509109,
        0.019374262182371357, -0.09997696599218861, -0.048720545132614451,
        0.42065562930387912, 0.78291047046662365, 0.42065625306494747,
        -0.04872053642785823, -0.099979431284658554, 0.019376227087760461,
        0.050304012834145956, -0.015158095475377919, -0.02615093805361066,
        0.011127524363625262, 0.012522048600081612, -0.00712778908883258,
        -0.0053574822362208408, 0.0039908874016911329, 0.0019614379070710861,
        -0.0019280756737215848, -0.00062091752703089518, 0.00078813012513615844,
        0.00018495211475399824, -0.00024026059510677935, -0.00011603203920774441,
        4.4435834326570468e-05, 9.9888538398792579e-05, 4.5881764489602597e-06,
        -0.00012425857537511786, 2.5197131210603434e-05, 9.2257834842812171e-05,
        -4.8584805351174442e-05, 7.7188604410737558e-05, -3.6599579952246735e-05,
        1.9508972117489984e-05, -4.8326809724432798e-06}},
    };
    return t;
}

}  // namespace

const std::vector<std::string>& supported_bases() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& t : tables()) v.emplace_back(t.name);
        return v;
    }();
    return names;
}

WaveletBasis make_basis(const std::string& name) {
    const auto& tabs = tables();
    auto it = std::find_if(tabs.begin(), tabs.end(),
                           [&](const FilterTable& t) { return name == t.name; });
    if (it == tabs.end()) {
        std::ostringstream msg;
        msg << "unsupported basis \"" << name << "\"; supported:";
        for (const auto& t : tabs) msg << ' ' << t.name;
        throw std::invalid_argument(msg.str());
    }
    WaveletBasis b;
    b.name = it->name;
    const Index n = static_cast<Index>(it->dec_lo.size());
    b.dec_lo = Eigen::Map<const Vector>(it->dec_lo.data(), n);
    b.rec_lo = Eigen::Map<const Vector>(it->rec_lo.data(), n);
    b.dec_hi.resize(n);
    b.rec_hi.resize(n);
    for (Index i = 0; i < n; ++i) {
        const double sign = (i % 2 == 0) ? 1.0 : -1.0;
        b.dec_hi(i) = -sign * b.rec_lo(i);  // (-1)^(i+1) rec_lo[i]
        b.rec_hi(i) = sign * b.dec_lo(i);   // (-1)^i  dec_lo[i]
    }
    b.length = n;
    return b;
}

}  // namespace wavemotion
