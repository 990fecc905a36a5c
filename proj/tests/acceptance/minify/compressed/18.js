function r(r,t){for(var a=[],n=[],e=0;e<=t.length;e++)a[e]=e;for(var h=1;h<=r.length;h++){n[0]=h;for(var o=1;o<=t.length;o++){var v=r.charCodeAt(h-1)===t.charCodeAt(o-1)?0:1;n[o]=Math.min(n[o-1]+1,a[o]+1,a[o-1]+v)}var f=a;a=n,n=f}return a[t.length]}
