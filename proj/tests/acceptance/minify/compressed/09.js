function n(n,r){for(var B=["B","KB","MB","GB","TB"],t=0,e=n;e>=1024&&t<B.length-1;)e/=1024,t++;var l=null==r?1:r;return e.toFixed(0===t?0:l)+" "+B[t]}
