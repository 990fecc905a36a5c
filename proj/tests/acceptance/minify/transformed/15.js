function t(t,n){let e=0;let o=null;const l=!1;return(...l)=>{const i=Date.now();const s=n-(i-e);if(s<=0){e=i;t(...l)}else if(!o){o=setTimeout(()=>{o=null;e=Date.now();t(...l)},s)}}}
