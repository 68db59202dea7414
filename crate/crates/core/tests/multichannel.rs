use pesq_core::testsignal::{speech_like, stereo_corpus, Degradation};
use pesq_core::{
    compute_pesq, downmix_mono, score_multichannel, split_channels, AudioSignal, Mode, PesqError, Signal,
    StereoStrategy,
};

fn dual_mono() -> (Signal, Signal) {
    let rate = 16000;
    let x = speech_like(rate, 3.0, 11);
    let y = Degradation::Noise { snr_db: 15.0 }.apply(&x, rate, 11);
    (
        AudioSignal::from_channels(rate, vec![x.clone(), x]).unwrap(),
        AudioSignal::from_channels(rate, vec![y.clone(), y]).unwrap(),
    )
}

#[test]
fn dual_mono_strategies_agree_exactly() {
    let (r, d) = dual_mono();
    let cfg = Mode::Wb.config(16000).unwrap();
    let dmx = score_multichannel(&r, &d, &cfg, StereoStrategy::MonoDmx).unwrap();
    let avg = score_multichannel(&r, &d, &cfg, StereoStrategy::AvgScores).unwrap();
    let per = score_multichannel(&r, &d, &cfg, StereoStrategy::PerChannel).unwrap();
    assert_eq!(dmx.score, avg.score);
    assert_eq!(avg.score, per.score);
    assert_eq!(per.per_channel, Some(vec![dmx.score, dmx.score]));
    assert!(dmx.per_channel.is_none());
}

#[test]
fn per_channel_scores_keep_channel_order() {
    let pair = &stereo_corpus()[3];
    let cfg = Mode::NbLqo.config(16000).unwrap();
    let per = score_multichannel(&pair.reference, &pair.degraded, &cfg, StereoStrategy::PerChannel).unwrap();
    let expected: Vec<f64> = split_channels(&pair.reference)
        .iter()
        .zip(split_channels(&pair.degraded).iter())
        .map(|(r, d)| compute_pesq(r, d, &cfg).unwrap().value())
        .collect();
    assert_eq!(per.per_channel.as_deref(), Some(expected.as_slice()));
    assert_eq!(per.score, (expected[0] + expected[1]) / 2.0);
}

#[test]
fn downmix_strategy_scores_the_mean_channel() {
    let pair = &stereo_corpus()[0];
    let cfg = Mode::WbC2.config(16000).unwrap();
    let dmx = score_multichannel(&pair.reference, &pair.degraded, &cfg, StereoStrategy::MonoDmx).unwrap();
    let direct = compute_pesq(&downmix_mono(&pair.reference), &downmix_mono(&pair.degraded), &cfg).unwrap();
    assert_eq!(dmx.score, direct.value());
    assert_eq!(dmx.mode, Mode::WbC2);
}

#[test]
fn mono_input_is_scored_directly_except_by_interleave() {
    let rate = 8000;
    let x = Signal::mono(rate, speech_like(rate, 2.0, 3));
    let cfg = Mode::NbRaw.config(rate).unwrap();
    for strategy in [
        StereoStrategy::MonoDmx,
        StereoStrategy::AvgScores,
        StereoStrategy::PerChannel,
    ] {
        assert_eq!(score_multichannel(&x, &x, &cfg, strategy).unwrap().score, 4.5);
    }
    assert!(matches!(
        score_multichannel(&x, &x, &cfg, StereoStrategy::Interleave),
        Err(PesqError::InterleaveMono)
    ));
}

#[test]
fn channel_counts_must_match() {
    let (r, _) = dual_mono();
    let mono = downmix_mono(&r);
    let cfg = Mode::Wb.config(16000).unwrap();
    assert!(matches!(
        score_multichannel(&r, &mono, &cfg, StereoStrategy::MonoDmx),
        Err(PesqError::ChannelMismatch {
            reference: 2,
            degraded: 1
        })
    ));
}

#[test]
fn strategy_names_parse() {
    for s in StereoStrategy::ALL {
        assert_eq!(s.as_str().parse::<StereoStrategy>().unwrap(), s);
    }
    assert_eq!("dmx".parse::<StereoStrategy>().unwrap(), StereoStrategy::MonoDmx);
    assert_eq!("avg".parse::<StereoStrategy>().unwrap(), StereoStrategy::AvgScores);
    assert!("left".parse::<StereoStrategy>().is_err());
}
