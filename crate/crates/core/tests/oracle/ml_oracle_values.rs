[
    (0.4, 2.8, 2.0, -1.3, 0.1580956007244366867239957),
    (0.6, 1.6, 1.0, -3.7, 0.2353003891563459467912962),
    (0.6849, 0.4099, 1.6681, -8.4481, -0.008358153864115961852944098),
    (0.5493, 1.2447, 2.5984, -16.2331, -0.00008606067787273791606089388),
    (0.7877, 1.5613, 2.1189, -9.7383, -0.0004712781886190713423722986),
    (0.8291, 0.4925, 1.4662, -0.8974, -0.09071401586460471817944778),
    (0.906, 0.8584, 2.9096, -1.7204, -0.1267481013865061120195457),
    (0.7208, 1.4916, 2.6136, -2.5537, 0.0003950553203706001653406973),
    (0.9375, 2.9303, 1.6603, -12.5593, 0.01580098341520613376272898),
    (0.9184, 2.1777, 1.6808, -6.0241, 0.03808363180439648920856758),
    (0.5413, 1.6719, 1.3116, -13.4244, 0.03084018945306452625419345),
    (0.8535, 2.3133, 0.6418, -14.5239, 0.1871321504020185991993508),
    (0.7913, 1.4333, 2.455, -10.4685, -0.001104966182146322272814414),
    (0.8088, 1.8148, 2.9452, -5.8379, -0.002324077004176320630369982),
    (0.6046, 2.2917, 2.0278, -17.9785, 0.002784474561736459921917994),
    (0.8701, 1.9661, 0.7021, -0.5007, 0.8417309521563891672667871),
    (0.7921, 1.3048, 1.68, -3.9519, 0.01281837796085229238928382),
    (0.82, 1.6606, 1.4849, -19.2988, 0.006429646039000207256849843),
    (0.8533, 2.8042, 1.5345, -0.4292, 0.454976966271527767044188),
    (0.6981, 1.4683, 1.0596, -19.6231, 0.0339016392839534820853002),
    (0.7129, 0.865, 0.5093, -2.0105, 0.4110775369132169738143917),
    (0.9163, 0.7349, 2.3619, -1.947, -0.1368687700558002847092906),
    (0.7984, 0.5423, 1.9133, -12.9916, -0.0006458500329077516688176299),
    (0.8116, 1.7214, 1.5602, -7.622, 0.02398955805484190751027102),
    (0.9194, 0.9481, 2.5686, -14.6503, 0.0005770259503029150071724684),
    (0.8667, 2.9508, 2.0579, -17.5454, 0.002850009812430285522545212),
    (0.8052, 2.7801, 2.6337, -18.6546, 0.0003369046182524716019474211),
    (0.5387, 1.7332, 1.4146, -12.3888, 0.02633464373630191730452721),
    (0.8181, 2.5512, 1.1029, -12.2227, 0.06523723922584353034877451),
    (0.9978, 0.5116, 2.221, -15.5246, 0.001508333397443518046437),
    (0.5288, 2.3407, 2.9711, -17.1456, 0.0001686659777646621941687442),
    (0.5245, 0.5115, 1.1366, -19.8432, -0.002157855871613211779156025),
    (0.6309, 1.9006, 1.0611, -12.9267, 0.0690128881391399651303985),
    (0.5558, 1.01, 2.5984, -18.5889, -0.0001352328250197495655003049),
    (0.5835, 2.0217, 0.636, -16.4663, 0.1804685388126501854439845),
    (0.8692, 2.9458, 2.095, -19.9973, 0.001937353503555308629047153),
    (0.5043, 2.5415, 2.9921, -4.8014, 0.006178059768452363393764516),
    (0.8862, 1.7581, 1.8378, -4.1441, 0.02530375891463527394372623),
    (0.6027, 0.9092, 2.7218, -10.6783, -0.0004582280623434798906740585),
    (0.8049, 2.6169, 1.7231, -12.1807, 0.0138131711557578109864549),
    (0.8147, 1.2802, 2.145, -12.8993, -0.001367245385223208492883896),
    (0.9276, 1.8046, 0.6027, -2.1571, 0.6035861543892557111006423),
    (0.788, 0.9907, 0.6105, -1.758, 0.4340510235932481783507992),
    (0.5689, 2.5094, 1.7229, -18.3472, 0.006906855967014230659242966),
    (0.5036, 1.6641, 2.5878, -5.1735, 0.006023256766687240242481974),
    (0.8661, 0.8678, 1.5643, -1.3733, 0.0004410659222384229694199724),
    (0.9292, 0.5275, 0.9412, -7.152, -0.04655963419594448289117651),
    (0.9173, 1.4901, 1.9307, -15.2067, -0.0013074580379997612825056),
    (0.5342, 2.1198, 2.1356, -4.4666, 0.03058879468977044261591658),
    (0.6585, 2.8003, 2.5074, -14.3428, 0.001223140018804047080441345),
    (0.6943, 1.9212, 1.9399, -14.3588, 0.003738628907445120878662952),
    (0.8128, 2.7177, 2.5882, -7.3261, 0.00424976630896137790360935),
]
