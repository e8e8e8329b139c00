# Independent check of the projective test under a true null (numpy/scipy).
# Two leaves of 50 white-noise curves, D = 32, 1000 bridge directions, asymptotic KS.
import numpy as np
from scipy.stats import ks_2samp
rng=np.random.default_rng(1)
D=32; kept=0; ks=[]
for trial in range(100):
    a=rng.standard_normal((50,D)); b=rng.standard_normal((50,D))
    W=np.cumsum(rng.standard_normal((1000,D-1))*np.sqrt(1/(D-1)),axis=1)
    W=np.hstack([np.zeros((1000,1)),W]); t=np.arange(D)/(D-1)
    B=W-t*W[:,-1:]
    pa=a@B.T/(D-1); pb=b@B.T/(D-1)
    k=sum(ks_2samp(pa[:,i],pb[:,i],method='asymp').pvalue<0.05 for i in range(1000))
    ks.append(k); kept+=k>=63
print("kept",kept,"/100 mean",np.mean(ks),"var",np.var(ks))
