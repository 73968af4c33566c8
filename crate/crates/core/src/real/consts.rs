//! Fractional bits of pi and ln 2, 4160 bits each, as big-endian hex.
//! Both are re-derived independently in the tests of the parent module.

pub(crate) const TABLE_BITS: u32 = 4160;

pub(crate) const PI_FRAC_HEX: [&str; 17] = [
    "243f6a8885a308d313198a2e03707344a4093822299f31d0082efa98ec4e6c89",
    "452821e638d01377be5466cf34e90c6cc0ac29b7c97c50dd3f84d5b5b5470917",
    "9216d5d98979fb1bd1310ba698dfb5ac2ffd72dbd01adfb7b8e1afed6a267e96",
    "ba7c9045f12c7f9924a19947b3916cf70801f2e2858efc16636920d871574e69",
    "a458fea3f4933d7e0d95748f728eb658718bcd5882154aee7b54a41dc25a59b5",
    "9c30d5392af26013c5d1b023286085f0ca417918b8db38ef8e79dcb0603a180e",
    "6c9e0e8bb01e8a3ed71577c1bd314b2778af2fda55605c60e65525f3aa55ab94",
    "5748986263e8144055ca396a2aab10b6b4cc5c341141e8cea15486af7c72e993",
    "b3ee1411636fbc2a2ba9c55d741831f6ce5c3e169b87931eafd6ba336c24cf5c",
    "7a325381289586773b8f48986b4bb9afc4bfe81b6628219361d809ccfb21a991",
    "487cac605dec8032ef845d5de98575b1dc262302eb651b8823893e81d396acc5",
    "0f6d6ff383f442392e0b4482a484200469c8f04a9e1f9b5e21c66842f6e96c9a",
    "670c9c61abd388f06a51a0d2d8542f68960fa728ab5133a36eef0b6c137a3be4",
    "ba3bf0507efb2a98a1f1651d39af017666ca593e82430e888cee8619456f9fb4",
    "7d84a5c33b8b5ebee06f75d885c12073401a449f56c16aa64ed3aa62363f7706",
    "1bfedf72429b023d37d0d724d00a1248db0fead349f1c09b075372c980991b7b",
    "25d479d8f6e8def7",
];

pub(crate) const LN2_HEX: [&str; 17] = [
    "b17217f7d1cf79abc9e3b39803f2f6af40f343267298b62d8a0d175b8baafa2b",
    "e7b876206debac98559552fb4afa1b10ed2eae35c138214427573b291169b825",
    "3e96ca16224ae8c51acbda11317c387eb9ea9bc3b136603b256fa0ec7657f74b",
    "72ce87b19d6548caf5dfa6bd38303248655fa1872f20e3a2da2d97c50f3fd5c6",
    "07f4ca11fb5bfb90610d30f88fe551a2ee569d6dfc1efa157d2e23de1400b396",
    "17460775db8990e5c943e732b479cd33cccc4e659393514c4c1a1e0bd1d6095d",
    "25669b333564a3376a9c7f8a5e148e82074db6015cfe7aa30c480a5417350d2c",
    "955d5179b1e17b9dae313cdb6c606cb1078f735d1b2db31b5f50b5185064c18b",
    "4d162db3b365853d7598a1951ae273ee5570b6c68f96983496d4e6d330af889b",
    "44a02554731cdc8ea17293d1228a4ef98d6f5177fbcf0755268a5c1f9538b982",
    "61affd446b1ca3cf5e9222b88c66d3c5422183edc99421090bbb16faf3d949f2",
    "36e02b20cee886b905c128d53d0bd2f9621363196af503020060e49908391a0c",
    "57339ba2beba7d052ac5b61cc4e9207cef2f0ce2d7373958d7622658901e646a",
    "95184460dc4e7487156e0c292413d5e361c1696dd24aaebd473826fda0c238b9",
    "0ab111bbbd67c724972cd18bfbbd9d426c472096e76115c05f6f7cebac9f45ae",
    "cecb72f19c38339d8f6826250dea891ef07afff3a892374e175eb4afc8daadd8",
    "85db6ab03a49bd0d",
];
