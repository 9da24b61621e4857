//! Reciprocal-gamma helpers for Temme's series.

/// Taylor coefficients of `1/Gamma(z)` about `z = 0`, starting at `z^1`.
#[allow(clippy::excessive_precision)]
const RGAMMA_TAYLOR: [f64; 28] = [
    1.0,
    0.577_215_664_901_532_860_61,
    -0.655_878_071_520_253_881_08,
    -0.042_002_635_034_095_235_529,
    0.166_538_611_382_291_489_5,
    -0.042_197_734_555_544_336_748,
    -0.009_621_971_527_876_973_562_1,
    0.007_218_943_246_663_099_542_4,
    -0.001_165_167_591_859_065_112_1,
    -0.000_215_241_674_114_950_972_82,
    0.000_128_050_282_388_116_186_15,
    -0.000_020_134_854_780_788_238_656,
    -1.250_493_482_142_670_657_3e-6,
    1.133_027_231_981_695_882_4e-6,
    -2.056_338_416_977_607_103_5e-7,
    6.116_095_104_481_415_817_9e-9,
    5.002_007_644_469_222_930_1e-9,
    -1.181_274_570_487_020_144_6e-9,
    1.043_426_711_691_100_510_5e-10,
    7.782_263_439_905_071_254e-12,
    -3.696_805_618_642_205_708_2e-12,
    5.100_370_287_454_475_979e-13,
    -2.058_326_053_566_506_783_2e-14,
    -5.348_122_539_423_017_982_4e-15,
    1.226_778_628_238_260_790_2e-15,
    -1.181_259_301_697_458_769_5e-16,
    1.186_692_254_751_600_332_6e-18,
    1.412_380_655_318_031_781_6e-18,
];

/// The four gamma combinations Temme's method needs at order `mu`, |mu| <= 1/2.
#[derive(Debug, Clone, Copy)]
pub(crate) struct TemmeGammas {
    /// (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu)
    pub gam1: f64,
    /// (1/Gamma(1-mu) + 1/Gamma(1+mu)) / 2
    pub gam2: f64,
    /// 1/Gamma(1+mu)
    pub gampl: f64,
    /// 1/Gamma(1-mu)
    pub gammi: f64,
}

impl TemmeGammas {
    pub fn new(mu: f64) -> Self {
        debug_assert!(mu.abs() <= 0.5 + 1e-15);
        // 1/Gamma(1+x) = sum_k c_k x^(k-1); split into even and odd powers so
        // gam1 is obtained without the 0/0 at mu = 0.
        let mu2 = mu * mu;
        let mut even = 0.0; // sum over odd k: c_k mu^(k-1)
        let mut odd = 0.0; // sum over even k: c_k mu^(k-2)
        for (i, c) in RGAMMA_TAYLOR.iter().enumerate().rev() {
            let k = i + 1;
            if k % 2 == 1 {
                even = even * mu2 + c;
            } else {
                odd = odd * mu2 + c;
            }
        }
        let gam1 = -odd;
        let gam2 = even;
        Self {
            gam1,
            gam2,
            gampl: gam2 - mu * gam1,
            gammi: gam2 + mu * gam1,
        }
    }
}
