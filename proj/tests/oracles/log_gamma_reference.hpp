#pragma once
// Generated by freeze_log_gamma.py; do not edit.
#include <array>

struct LogGammaReference {
    double re, im, lg_re, lg_im;
};

inline constexpr std::array<LogGammaReference, 120> kLogGammaReference{{
    {1.0, 0.0, 0.0, 0.0},
    {2.0, 0.0, 0.0, 0.0},
    {5.0, 0.0, 3.1780538303479458, 0.0},
    {0.5, 0.0, 0.5723649429247001, 0.0},
    {-0.5, 0.0, 1.2655121234846454, -3.141592653589793},
    {-9.5, 0.25, -13.073890641433975, -30.84015030522655},
    {-3.7, -2.0, -6.723869692494069, 10.249753986292474},
    {0.1, 0.1, 1.8989912736759003, -0.8274647077730758},
    {2.0, 40.0, -56.37928295503587, 109.88429448438701},
    {2.0, -40.0, -56.37928295503587, -109.88429448438701},
    {0.5, 500.0, -784.4792248642436, 2607.3041325444487},
    {200.0, 0.0, 857.9336698258575, 0.0},
    {200.0, -500.0, 460.39323230899436, -2881.871751774161},
    {-10.0, 3.0, -22.26868911418819, -25.891696409086343},
    {0.001, 0.001, 6.560604473837553, -0.7859737349296534},
    {15.0, 0.5, 25.182605607824883, 1.3372722665328187},
    {14.999, 0.0, 25.18854687054693, 0.0},
    {3.0, 1e-08, 0.6931471805599453, 9.227843350984671e-09},
    {60.0, 250.0, -62.70083257349893, 1216.812643142231},
    {-0.99, 0.0, 4.609530213895522, -3.141592653589793},
    {117.64535175249057, -2.4115101390496516, 441.7603944823828, -11.48720235924206},
    {21.466445377262744, 3.650037822783405, 43.43371920708731, 11.125392665636834},
    {60.27789461314302, 177.99914854962526, 32.16184141153204, 828.395137840991},
    {179.2686196029338, -450.0628083419224, 390.6222763671985, -2545.7293486716153},
    {65.20655965256375, 101.73245582120671, 144.13020957751039, 450.7751287472968},
    {28.15210265072136, -173.29486457015776, -128.62913813959236, -761.2783654763386},
    {39.33170521981622, -84.92678850441462, 41.27407145154186, -344.7056210848449},
    {34.12274950616535, 1.218051141874577, 85.46367992064627, 4.282008064931396},
    {143.33713352196045, 435.5102477181091, 187.25561703954108, 2412.2231206542483},
    {166.3506760324853, 210.85137170379744, 571.8277698565275, 1118.2002504148809},
    {188.46581017143518, -1.296302431906804, 797.1863060143075, -6.787788487125115},
    {69.18605735882078, 0.34217463069269005, 222.74227715210156, 1.4472478560560287},
    {186.38129830371614, 3.182108690202565, 786.2600926558023, 16.62702174121467},
    {129.82011153446956, -171.0106296969551, 407.87058645253734, -866.3550112499564},
    {191.40403431628633, -0.9379124372196941, 812.5966271629687, -4.925706055857742},
    {10.019121093658843, 217.02351004875595, -288.76482611769035, 965.3083029687823},
    {59.54317283472915, -3.8350916978262806, 182.54453475767818, -15.643274235303048},
    {116.69372109873633, -4.377201810655331, 437.173646419256, -20.815775828647197},
    {128.72031392867467, 2.1374695580854928, 495.02983149663976, 10.374847246908276},
    {142.55239686661028, 4.751298391926044, 562.8263224657311, 23.549261407640962},
    {181.58252866777315, 41.995421181550114, 756.4488196615049, 218.70278863750966},
    {189.52066965298027, -140.61237594270648, 754.40959686806, -748.3179246510034},
    {152.09496684899, -0.7406904773535041, 610.5123953269988, -3.7191684049140887},
    {-0.42835410116355277, 4.157847905627159, -6.940545854240272, 0.21559474399777148},
    {177.08668780155074, 3.7083836514273205, 737.9193866295542, 19.18675697576181},
    {151.91891599352695, 124.35173789576163, 563.1577152975727, 636.0603860734512},
    {85.30330610058002, 1.1865453522703007, 292.661888814674, 5.268703883540002},
    {8.192745075232889, -1.8563370892269981, 8.694563138211484, -3.8063847122231453},
    {82.1693624417245, -421.98589975145717, -167.7417731670264, -2249.338676325997},
    {36.59396553925757, 482.4034095874048, -533.7882530958329, 2553.608789523397},
    {135.24922375722903, -214.95142860273563, 394.87704593343165, -1111.2594192323759},
    {2.1357517377055775, 0.5506361201218652, -0.025475737376005687, 0.28838599002558435},
    {192.2996943459814, -54.64656055457209, 809.6220875788196, -287.96905119358786},
    {149.05974469246647, 1.7373730759399049, 595.294135963993, 8.688623392513028},
    {160.17460335024353, 389.89104639521327, 345.33218957738745, 2155.124942758853},
    {10.543010147250829, -4.973391193074189, 12.855108134211605, -11.664498078416104},
    {138.98544043724937, -177.14531609716568, 451.67404241185744, -907.8200002341136},
    {182.63805684770986, 409.35811955289023, 459.0693436573615, 2299.5863728241393},
    {115.39382643633348, 95.52697329480907, 395.0107274399129, 462.4456422330393},
    {79.3587324499961, -4.205845250039223, 266.3755532066922, -18.371714210136208},
    {199.01925279691918, -25.208268017489104, 851.1460138450025, -133.44151981099918},
    {124.09484990815423, 285.16744259978793, 255.33905747159133, 1495.0458879684875},
    {77.1689437918056, 3.4829951764632465, 256.8749952822415, 15.115668077401311},
    {8.681466691742237, -196.29934046917617, -264.22978095210095, -852.7718383159316},
    {36.58180375675427, -1.168751912445284, 94.19877934238185, -4.1911390631189045},
    {133.91150609043504, -0.7636247729605747, 520.3459192651478, -3.736756730897685},
    {129.78686014771992, -473.90826607982694, 54.612788985494774, -2631.507616342976},
    {-8.387179730393528, -1.3656363795214954, -13.790224497414753, 24.930599123091586},
    {110.01228629160421, -155.99554827940932, 316.80897034882184, -767.9981718348222},
    {140.9285069245007, 4.376422496629623, 554.7985803126571, 21.640807265772274},
    {100.58650921761101, 3.1086078076940247, 361.78570061619985, 14.31886863765195},
    {161.21626376708653, 3.5579288830992226, 656.5438743885317, 18.07329586678098},
    {82.23420149725253, -4.686933910301847, 278.96423127946133, -20.641380029824965},
    {99.19099672614556, -80.25322366528695, 325.67182018766766, -376.0152331426803},
    {49.70566319190134, 2.244088627143972, 143.366968746174, 8.743804842649451},
    {132.29799013089462, -316.5097996765869, 266.1798203102779, -1686.078753407195},
    {43.640427678961906, -4.578679367497002, 119.93547075860815, -17.24492641652279},
    {122.07645546428236, -4.007935225438867, 462.9091312480669, -19.241003713274562},
    {150.003124148616, -3.5112726475429215, 599.9838847043313, -17.582385532481553},
    {12.141716759274779, -1.7310468152831193, 17.72119272057464, -4.255875716564091},
    {94.35090465708964, 2.797084022555838, 333.26926345020223, 12.703964403685447},
    {68.40722609874929, -107.71686607562947, 153.53434495968864, -482.8394999212844},
    {110.43491291578972, 1.1440346589886285, 407.6595259243095, 5.376859917664782},
    {176.91835315713894, 437.73190913796805, 390.7979781713475, 2466.852809087381},
    {74.07472899818538, 207.9662827396595, 68.4225562281664, 1004.8430849714821},
    {41.193280414677055, 2.3087119633847237, 110.97104084185607, 8.557527187666429},
    {174.4800842961668, -2.1027560321006744, 724.4788692201989, -10.848048044725935},
    {25.01386432619016, -0.16549278332645834, 54.82852319110581, -0.5294636695184872},
    {112.1894759860165, -1.4114580062045579, 415.9167444790392, -6.656086537007508},
    {166.8871638643281, 1.1043939970155865, 685.4846239034786, 5.6482311902481},
    {-7.8725181309967756, -3.8009718752593113, -19.601391596664815, 18.101079527949633},
    {172.01843750742714, 336.94035565591696, 476.76895117694676, 1851.4993636630993},
    {135.3236599868129, 1.8321043259270482, 527.2533958834825, 8.984641022638039},
    {186.733090324311, 4.256754316515991, 788.0771688420804, 22.25042653250925},
    {199.6724626783012, 4.935399855029624, 856.138219634612, 26.12936142401109},
    {46.73838822670514, -335.40400839421443, -256.8950753822133, -1684.536977017747},
    {136.0113162216852, -4.516251752074637, 530.5645964078121, -22.171374935628034},
    {169.47535957438302, 235.55100412094293, 566.5271662616783, 1260.182206774537},
    {89.6155121711505, 0.9628556773869654, 311.9204734762216, 4.323181666588028},
    {125.52597884534995, -206.84286445215804, 349.5431710627104, -1056.657913770427},
    {12.147005556797236, 285.3524886786828, -381.4595071417541, 1346.0096647041255},
    {99.1599194422597, -1.6280738628494196, 355.2598228236313, -7.475673058933871},
    {156.54435256605274, -4.253103227451915, 632.8622356722655, -21.479301658472867},
    {94.41283628320932, -5.853708371089567, 333.409919425469, -26.593505790780036},
    {9.838117664326742, 0.797618692091052, 12.404703427389554, 1.7833090471649968},
    {180.79963878877095, 220.90705828969408, 644.0700848123087, 1187.6742468970854},
    {53.98957414825608, -1.5330731342003565, 160.26767133042642, -6.101076386681736},
    {99.97424431493361, -3.444950591789162, 358.9560887563637, -15.847126809666475},
    {122.30949338449483, 54.26063278799222, 452.3798036285215, 262.28127764460504},
    {170.74211564832785, -0.5513518787319498, 705.2471647716782, -2.832418555574248},
    {71.04803246061965, 3.843518680239889, 230.53882222300922, 16.36107644491075},
    {18.326751114192287, 357.87893838473474, -456.4038538166015, 1774.0774223264893},
    {130.79093965317668, 22.90068597407162, 503.1122494063644, 111.63796392062538},
    {183.0701110685025, 4.5914626864029415, 768.9579519646506, 23.908852342443105},
    {135.5040540158687, -20.528564345366078, 526.5958026381118, -100.77747836407883},
    {144.98862525447848, 473.9521899911947, 148.82468047275287, 2651.384721573069},
    {142.1854842882987, -2.4525362112052127, 561.0665245176366, -12.149034721568913},
    {-8.31777066090295, 379.3295553983613, -647.2948217947309, 1859.3298218167727},
    {52.749172832433715, 161.87231639157721, 13.312175856197804, 735.3222414291874},
    {83.1033801740362, -3.228273226885312, 282.86748767835513, -14.250602482733594},
}};
