// Generated by `regenerate_null_quantile_tables`; do not edit by hand.
pub(crate) const GRID_N_LEN: usize = 5;
pub(crate) const GRID_T_LEN: usize = 5;
pub(crate) const GRID_N: [usize; GRID_N_LEN] = [10, 20, 30, 50, 100];
pub(crate) const GRID_T: [usize; GRID_T_LEN] = [15, 20, 30, 50, 100];
pub(crate) const CIPS_PROBS: [f64; 10] = [0.01, 0.025, 0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95, 0.99];
pub(crate) const CADF_PROBS: [f64; 17] = [0.005, 0.01, 0.025, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.975, 0.99, 0.995];
pub(crate) const CIPS_Q: [[[f64; 10]; GRID_T_LEN]; GRID_N_LEN] = [
    [
        [-2.6669, -2.5070, -2.3750, -2.2297, -1.9794, -1.7106, -1.4491, -1.2110, -1.0698, -0.7842],
        [-2.6296, -2.4755, -2.3524, -2.2179, -1.9921, -1.7398, -1.4872, -1.2620, -1.1251, -0.8747],
        [-2.5723, -2.4537, -2.3378, -2.2166, -2.0027, -1.7595, -1.5190, -1.3021, -1.1732, -0.9352],
        [-2.5572, -2.4330, -2.3338, -2.2172, -2.0093, -1.7819, -1.5452, -1.3342, -1.1961, -0.9710],
        [-2.5425, -2.4362, -2.3272, -2.2093, -2.0139, -1.7895, -1.5601, -1.3506, -1.2296, -1.0025],
    ],
    [
        [-2.4369, -2.3314, -2.2286, -2.1171, -1.9252, -1.7183, -1.5078, -1.3213, -1.2158, -1.0281],
        [-2.3935, -2.2879, -2.2029, -2.1026, -1.9315, -1.7345, -1.5453, -1.3711, -1.2742, -1.0861],
        [-2.3770, -2.2941, -2.2093, -2.1115, -1.9476, -1.7604, -1.5748, -1.4120, -1.3154, -1.1372],
        [-2.3666, -2.2782, -2.1995, -2.1115, -1.9548, -1.7732, -1.5911, -1.4326, -1.3392, -1.1714],
        [-2.3593, -2.2778, -2.2063, -2.1175, -1.9641, -1.7872, -1.6129, -1.4585, -1.3627, -1.2031],
    ],
    [
        [-2.3295, -2.2421, -2.1630, -2.0630, -1.8998, -1.7104, -1.5262, -1.3645, -1.2754, -1.1144],
        [-2.3121, -2.2255, -2.1517, -2.0624, -1.9085, -1.7322, -1.5551, -1.4072, -1.3216, -1.1636],
        [-2.3024, -2.2174, -2.1479, -2.0665, -1.9224, -1.7530, -1.5870, -1.4425, -1.3619, -1.2146],
        [-2.3046, -2.2275, -2.1585, -2.0764, -1.9370, -1.7740, -1.6120, -1.4755, -1.4011, -1.2738],
        [-2.3019, -2.2215, -2.1587, -2.0841, -1.9458, -1.7883, -1.6285, -1.4961, -1.4197, -1.2837],
    ],
    [
        [-2.2508, -2.1772, -2.1072, -2.0285, -1.8820, -1.7089, -1.5409, -1.4044, -1.3313, -1.1941],
        [-2.2353, -2.1662, -2.1035, -2.0273, -1.8910, -1.7299, -1.5745, -1.4443, -1.3726, -1.2511],
        [-2.2386, -2.1679, -2.1036, -2.0336, -1.9094, -1.7533, -1.6062, -1.4850, -1.4150, -1.2964],
        [-2.2288, -2.1648, -2.1101, -2.0436, -1.9196, -1.7699, -1.6253, -1.5122, -1.4487, -1.3375],
        [-2.2262, -2.1687, -2.1134, -2.0483, -1.9269, -1.7788, -1.6427, -1.5320, -1.4714, -1.3585],
    ],
    [
        [-2.1961, -2.1337, -2.0720, -1.9999, -1.8706, -1.7090, -1.5553, -1.4381, -1.3767, -1.2716],
        [-2.1759, -2.1168, -2.0686, -2.0015, -1.8809, -1.7272, -1.5845, -1.4773, -1.4183, -1.3230],
        [-2.1698, -2.1181, -2.0685, -2.0096, -1.8957, -1.7472, -1.6161, -1.5156, -1.4610, -1.3690],
        [-2.1779, -2.1272, -2.0801, -2.0195, -1.9052, -1.7661, -1.6422, -1.5459, -1.4942, -1.4028],
        [-2.1776, -2.1308, -2.0830, -2.0284, -1.9174, -1.7787, -1.6558, -1.5632, -1.5178, -1.4344],
    ],
];
pub(crate) const CADF_Q: [[[f64; 17]; GRID_T_LEN]; GRID_N_LEN] = [
    [
        [-5.1405, -4.6402, -4.0199, -3.5534, -3.0643, -2.5468, -2.2067, -1.9309, -1.6805, -1.4347, -1.1683, -0.8491, -0.3896, 0.0018, 0.3569, 0.8021, 1.1152],
        [-4.7446, -4.3373, -3.8267, -3.4325, -3.0134, -2.5421, -2.2242, -1.9654, -1.7284, -1.4921, -1.2335, -0.9222, -0.4697, -0.0822, 0.2611, 0.6652, 0.9558],
        [-4.4175, -4.1172, -3.6964, -3.3433, -2.9678, -2.5376, -2.2404, -1.9942, -1.7663, -1.5352, -1.2845, -0.9745, -0.5279, -0.1448, 0.1930, 0.5871, 0.8533],
        [-4.2348, -3.9733, -3.6024, -3.2967, -2.9497, -2.5455, -2.2610, -2.0192, -1.7916, -1.5631, -1.3164, -1.0154, -0.5721, -0.1966, 0.1425, 0.5297, 0.7982],
        [-4.1256, -3.8838, -3.5305, -3.2464, -2.9230, -2.5376, -2.2638, -2.0307, -1.8083, -1.5862, -1.3424, -1.0454, -0.6115, -0.2318, 0.0978, 0.4865, 0.7574],
    ],
    [
        [-5.1627, -4.6586, -4.0252, -3.5520, -3.0676, -2.5470, -2.2093, -1.9315, -1.6828, -1.4339, -1.1704, -0.8520, -0.3937, 0.0006, 0.3534, 0.7802, 1.0968],
        [-4.7306, -4.3372, -3.8382, -3.4335, -3.0109, -2.5402, -2.2234, -1.9637, -1.7241, -1.4867, -1.2265, -0.9138, -0.4637, -0.0798, 0.2648, 0.6800, 0.9618],
        [-4.4312, -4.1184, -3.6954, -3.3512, -2.9764, -2.5420, -2.2444, -1.9955, -1.7653, -1.5343, -1.2814, -0.9757, -0.5308, -0.1531, 0.1860, 0.5840, 0.8625],
        [-4.2297, -3.9663, -3.5896, -3.2791, -2.9392, -2.5374, -2.2558, -2.0144, -1.7893, -1.5631, -1.3156, -1.0130, -0.5749, -0.1968, 0.1365, 0.5333, 0.7949],
        [-4.1295, -3.8882, -3.5377, -3.2499, -2.9270, -2.5410, -2.2678, -2.0323, -1.8126, -1.5878, -1.3458, -1.0434, -0.6075, -0.2319, 0.1005, 0.4968, 0.7590],
    ],
    [
        [-5.1445, -4.6484, -4.0211, -3.5445, -3.0631, -2.5433, -2.2051, -1.9292, -1.6795, -1.4317, -1.1653, -0.8454, -0.3895, 0.0073, 0.3625, 0.7882, 1.1026],
        [-4.7223, -4.3353, -3.8293, -3.4300, -3.0064, -2.5388, -2.2216, -1.9611, -1.7217, -1.4819, -1.2237, -0.9104, -0.4591, -0.0771, 0.2665, 0.6799, 0.9735],
        [-4.4371, -4.1222, -3.6896, -3.3451, -2.9664, -2.5373, -2.2392, -1.9902, -1.7584, -1.5279, -1.2745, -0.9676, -0.5222, -0.1410, 0.1933, 0.5942, 0.8743],
        [-4.2389, -3.9752, -3.5968, -3.2852, -2.9403, -2.5381, -2.2578, -2.0191, -1.7944, -1.5688, -1.3186, -1.0171, -0.5769, -0.2006, 0.1324, 0.5279, 0.7926],
        [-4.1164, -3.8805, -3.5370, -3.2505, -2.9253, -2.5400, -2.2669, -2.0323, -1.8123, -1.5907, -1.3461, -1.0478, -0.6103, -0.2354, 0.0935, 0.4841, 0.7433],
    ],
    [
        [-5.1519, -4.6602, -4.0206, -3.5442, -3.0617, -2.5424, -2.2011, -1.9262, -1.6779, -1.4316, -1.1655, -0.8462, -0.3889, -0.0001, 0.3524, 0.7782, 1.0934],
        [-4.7105, -4.3354, -3.8259, -3.4300, -3.0092, -2.5394, -2.2223, -1.9618, -1.7210, -1.4820, -1.2232, -0.9113, -0.4580, -0.0716, 0.2676, 0.6776, 0.9742],
        [-4.4229, -4.1181, -3.6901, -3.3439, -2.9705, -2.5383, -2.2406, -1.9924, -1.7629, -1.5320, -1.2794, -0.9735, -0.5294, -0.1511, 0.1874, 0.5912, 0.8719],
        [-4.2368, -3.9733, -3.5965, -3.2865, -2.9417, -2.5384, -2.2565, -2.0154, -1.7911, -1.5646, -1.3164, -1.0133, -0.5730, -0.1962, 0.1395, 0.5326, 0.8129],
        [-4.1182, -3.8791, -3.5383, -3.2491, -2.9240, -2.5385, -2.2647, -2.0298, -1.8090, -1.5857, -1.3415, -1.0438, -0.6087, -0.2345, 0.0972, 0.4891, 0.7551],
    ],
    [
        [-5.1331, -4.6478, -4.0229, -3.5503, -3.0639, -2.5462, -2.2052, -1.9297, -1.6799, -1.4331, -1.1671, -0.8489, -0.3912, 0.0009, 0.3552, 0.7857, 1.1008],
        [-4.7227, -4.3433, -3.8319, -3.4318, -3.0094, -2.5396, -2.2219, -1.9607, -1.7208, -1.4823, -1.2245, -0.9121, -0.4622, -0.0756, 0.2676, 0.6783, 0.9722],
        [-4.4279, -4.1144, -3.6871, -3.3445, -2.9681, -2.5376, -2.2402, -1.9923, -1.7621, -1.5303, -1.2784, -0.9711, -0.5267, -0.1467, 0.1901, 0.5911, 0.8704],
        [-4.2356, -3.9718, -3.5984, -3.2891, -2.9434, -2.5399, -2.2562, -2.0168, -1.7929, -1.5665, -1.3177, -1.0153, -0.5756, -0.1985, 0.1340, 0.5271, 0.7964],
        [-4.1169, -3.8825, -3.5371, -3.2496, -2.9256, -2.5400, -2.2661, -2.0325, -1.8132, -1.5907, -1.3461, -1.0465, -0.6086, -0.2336, 0.0980, 0.4874, 0.7569],
    ],
];
