#pragma once

#include <array>

// Maclaurin coefficients in eta of the Temme coefficients c0, c1, c2 of the
// uniform expansion of the incomplete gamma ratio. Generated by
// tools/gen_temme_series.py from exact rational series of lambda(eta).

namespace hardedge::specialfn::detail {

inline constexpr int temme_series_degree = 34;

inline constexpr std::array<double, 35> temme_c0_series = {
    -0.3333333333333333333333333,
    0.08333333333333333333333333,
    -0.01481481481481481481481481,
    0.001157407407407407407407407,
    0.0003527336860670194003527337,
    -0.0001787551440329218106995885,
    0.00003919263178522437781697041,
    -0.000002185448510679992161473643,
    -0.000001854062210715159960701799,
    8.296711340953086005016242E-7,
    -1.766595273682607930436005E-7,
    6.707853543401498580369397E-9,
    1.026180978424030804257396E-8,
    -4.382036018453353186552975E-9,
    9.147699582236790234182488E-10,
    -2.551419399494624976687795E-11,
    -5.830772132550425067464089E-11,
    2.436194802066741624369407E-11,
    -5.027669280114175589090550E-12,
    1.100439203195613477083742E-13,
    3.371763262400985378827699E-13,
    -1.392388722418162065919366E-13,
    2.853489380704744320396691E-14,
    -5.139111834242572618990646E-16,
    -1.975228829434944283539624E-15,
    8.099521156704561334071157E-16,
    -1.652253121639816181915148E-16,
    2.530543009747888423270611E-18,
    1.168693973855957658882309E-17,
    -4.770037049820484758221678E-18,
    9.699126059056237124207097E-19,
    -1.293256553803817501044326E-20,
    -6.969230253185693380530546E-20,
    2.835145432176936599923196E-20,
    -5.750982159007047500162666E-21,
};

inline constexpr std::array<double, 35> temme_c1_series = {
    -0.001851851851851851851851852,
    -0.003472222222222222222222222,
    0.002645502645502645502645503,
    -0.0009902263374485596707818930,
    0.0002057613168724279835390947,
    -4.018775720164609053497942E-7,
    -0.00001809855033448997783702859,
    0.000007649160916081110084637422,
    -0.000001612090089456344600377522,
    4.647127802807434342261350E-9,
    1.378633446915720959311875E-7,
    -5.752545603517704964021945E-8,
    1.195162859977814732430765E-8,
    -1.754324171974764762375475E-11,
    -1.009154371060041262745775E-9,
    4.162792991842582636233723E-10,
    -8.563907026492980638074316E-11,
    6.067215101604758615127018E-14,
    7.162498964811485390079610E-12,
    -2.933186643771437117406367E-12,
    5.996696365683688723303745E-13,
    -2.167178652732331410171005E-16,
    -4.978339972369261640528155E-14,
    2.029162882371342477366948E-14,
    -4.131255713810610049351083E-15,
    8.286516239883096443801886E-19,
    3.410030886933332793363394E-16,
    -1.385419530289397153570345E-16,
    2.812346653228874665688603E-17,
    -3.406444194143028805267790E-21,
    -2.310979731511557191138167E-18,
    9.366757064132255925588583E-19,
    -1.897257015285848705217552E-19,
    1.491263074033959767924116E-23,
    1.553490004725139637978892E-20,
};

inline constexpr std::array<double, 35> temme_c2_series = {
    0.004133597883597883597883598,
    -0.002681327160493827160493827,
    0.0007716049382716049382716049,
    0.000002009387860082304526748971,
    -0.0001073665322636516052153912,
    0.00005292344882912012541642171,
    -0.00001276063518861872771337792,
    3.423578734096138074190200E-8,
    0.000001372195730906293320559439,
    -6.298992138380055022906722E-7,
    1.428061420606424179158460E-7,
    -2.047709842199086601491959E-10,
    -1.409252991086752105329302E-8,
    6.228974084922022033563943E-9,
    -1.367048839661711349927244E-9,
    9.428356159014678195477112E-13,
    1.287225240008931805954794E-10,
    -5.564595613436332114654148E-11,
    1.197593554636698100358981E-11,
    -4.168978225183863504038366E-15,
    -1.094064042788459440992990E-12,
    4.662239946390135746326205E-13,
    -9.905105763906905978441223E-14,
    1.893187676837351450568852E-17,
    8.859221872591127261760311E-15,
    -3.737820398046405453065602E-15,
    7.868833639035155257740884E-16,
    -9.000027395741211166085407E-20,
    -6.928881229347671720432272E-17,
    2.902038427016478335280301E-17,
    -6.067854696810876885472483E-18,
    4.472120729796852824064747E-22,
    5.279446144449785292259994E-19,
    -2.198811233485731958192299E-19,
    4.573282772134878743773622E-20,
};

}  // namespace hardedge::specialfn::detail
